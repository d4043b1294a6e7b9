#include "cherenkov/errors.hpp"

namespace cherenkov {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::input: return "input error";
    case ErrorKind::range: return "range error";
    case ErrorKind::unsupported_model: return "unsupported-model error";
    case ErrorKind::below_critical: return "below-critical error";
    case ErrorKind::capacity: return "capacity error";
    case ErrorKind::degenerate_interval: return "degenerate-interval error";
    case ErrorKind::numeric: return "numeric error";
    case ErrorKind::underflow: return "underflow error";
    }
    return "error";
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::numeric:
    case ErrorKind::underflow:
        return 3;
    default:
        return 2;
    }
}

Error::Error(ErrorKind kind, std::string where, const std::string& what)
    : std::runtime_error(where + ": " + to_string(kind) + ": " + what), m_kind(kind), m_where(std::move(where))
{
}

void fail(ErrorKind kind, const std::string& where, const std::string& what)
{
    throw Error(kind, where, what);
}

}  // namespace cherenkov
