#include "intdiff/error.hpp"

namespace intdiff {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::numerical:
        return 1;
    case ErrorKind::validation:
    case ErrorKind::size:
    case ErrorKind::alignment:
    case ErrorKind::config:
        return 2;
    case ErrorKind::parse:
    case ErrorKind::io:
        return 3;
    }
    return 1;
}

}  // namespace intdiff
