#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tooldc {

struct ChatRequest {
    std::string system;
    std::string user;
    double temperature = 0.0;
    std::size_t max_tokens = 512;
    std::string model;
};

struct Usage {
    std::uint64_t calls = 0;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
};

class LlmError : public std::runtime_error {
public:
    enum class Kind { Transport, MalformedResponse, AuthMissing };

    LlmError(Kind kind, std::string message, int status = 0)
        : std::runtime_error(std::move(message)), kind_(kind), status_(status) {}

    Kind kind() const noexcept { return kind_; }
    /// HTTP status when one was received, 0 otherwise.
    int status() const noexcept { return status_; }

private:
    Kind kind_;
    int status_;
};

/// Completion port shared by every stage. Implementations must tolerate
/// concurrent complete() calls.
class CompletionPort {
public:
    virtual ~CompletionPort() = default;

    /// Returns the assistant text or throws LlmError.
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual Usage usage() const = 0;
};

}  // namespace tooldc
