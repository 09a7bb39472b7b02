#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ragbench {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    Config = 2,
    Service = 3,
    Data = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

    static Error config(std::string code, const std::string& message) {
        return Error(ErrorKind::Config, std::move(code), message);
    }
    static Error service(std::string code, const std::string& message) {
        return Error(ErrorKind::Service, std::move(code), message);
    }
    static Error data(std::string code, const std::string& message) {
        return Error(ErrorKind::Data, std::move(code), message);
    }

private:
    ErrorKind kind_;
    std::string code_;
};

} // namespace ragbench
