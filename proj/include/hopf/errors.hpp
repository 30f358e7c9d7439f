#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

// Failure categories; the CLI maps each to its process exit code.
enum class error_kind : int {
    parse = 2,        // expression / problem-file schema errors
    numeric = 3,      // eigen iteration, Newton divergence, singular solves
    precondition = 4, // missing critical pair, resonance guard, bad level
    io = 5,
};

class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    error_kind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    error_kind kind_;
};

// Lexical/grammar error with a 1-based source location.
class parse_error : public error {
public:
    parse_error(int line, int column, const std::string& msg)
        : error(error_kind::parse,
                "parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_, column_;
};

class schema_error : public error {
public:
    explicit schema_error(const std::string& msg) : error(error_kind::parse, "schema error: " + msg) {}
};

// Evaluation domain error (log of non-positive, sqrt of negative, division by
// zero); carries a printed form of the offending subexpression.
class eval_error : public error {
public:
    eval_error(const std::string& msg, const std::string& subexpr)
        : error(error_kind::numeric, msg + " in '" + subexpr + "'"), subexpr_(subexpr) {}
    const std::string& subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(error_kind::numeric, msg) {}
};

class precondition_error : public error {
public:
    explicit precondition_error(const std::string& msg) : error(error_kind::precondition, msg) {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(error_kind::io, msg) {}
};

} // namespace hopf
