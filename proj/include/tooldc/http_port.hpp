#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "tooldc/llmport.hpp"

namespace tooldc {

struct EndpointConfig {
    /// Base URL such as http://localhost:8000/v1; "/chat/completions" is
    /// appended unless already present.
    std::string url;
    std::string model;
    /// Environment variable holding the bearer token.
    std::string api_key_env = "OPENAI_API_KEY";
    /// Fail with AuthMissing before sending when the key variable is unset.
    bool require_auth = false;
    std::chrono::milliseconds timeout{60'000};
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{1'000};
    double backoff_factor = 2.0;
    int max_in_flight = 8;
};

/// OpenAI-compatible chat-completions client. Retries connection failures,
/// timeouts, 429 and 5xx with exponential backoff; other statuses fail at once.
class HttpPort final : public CompletionPort {
public:
    explicit HttpPort(EndpointConfig config);
    ~HttpPort() override;

    std::string complete(const ChatRequest& request) override;
    Usage usage() const override;

    const EndpointConfig& config() const noexcept { return config_; }

private:
    std::string attempt(const std::string& body, const std::string& api_key);

    EndpointConfig config_;
    std::string origin_;
    std::string path_;
    std::counting_semaphore<4096> in_flight_;
    std::atomic<std::uint64_t> calls_{0};
    std::atomic<std::uint64_t> prompt_tokens_{0};
    std::atomic<std::uint64_t> completion_tokens_{0};
};

/// Extracts the first choice's message content from a chat-completions body.
/// Throws LlmError(MalformedResponse) with a body excerpt otherwise.
std::string extract_completion_text(const std::string& body);

}  // namespace tooldc
