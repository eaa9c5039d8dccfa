#pragma once

#include <stdexcept>
#include <string>

namespace elkies {

// Failure categories; the CLI maps them onto exit codes 1, 2 and 3.
enum class error_kind {
    verification,  // a mathematical assertion failed
    invalid_input,
    resource,      // memory, range or search budget exceeded
};

class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

class invalid_input_error : public error {
public:
    explicit invalid_input_error(const std::string& what) : error(error_kind::invalid_input, what) {}
};

class resource_error : public error {
public:
    explicit resource_error(const std::string& what) : error(error_kind::resource, what) {}
};

class verification_error : public error {
public:
    explicit verification_error(const std::string& what) : error(error_kind::verification, what) {}
};

}  // namespace elkies
