#pragma once

#include <stdexcept>
#include <string>

namespace cherenkov {

enum class ErrorKind {
    input,
    range,
    unsupported_model,
    below_critical,
    capacity,
    degenerate_interval,
    numeric,
    underflow
};

const char* to_string(ErrorKind kind);

// Process exit status for an error kind: 2 for caller mistakes, 3 for numerical failures.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string where, const std::string& what);

    ErrorKind kind() const { return m_kind; }
    const std::string& where() const { return m_where; }

private:
    ErrorKind m_kind;
    std::string m_where;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& where, const std::string& what);

inline void require(bool cond, ErrorKind kind, const char* where, const std::string& what)
{
    if (!cond) fail(kind, where, what);
}

}  // namespace cherenkov
