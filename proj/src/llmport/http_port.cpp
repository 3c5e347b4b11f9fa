#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "tooldc/http_port.hpp"
#include "tooldc/json_fwd.hpp"

namespace tooldc {

namespace {

constexpr std::string_view kCompletionsPath = "/chat/completions";

std::string excerpt(const std::string& body) { return body.size() <= 200 ? body : body.substr(0, 200) + "..."; }

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

struct Retryable : std::runtime_error {
    Retryable(std::string what, int status_) : std::runtime_error(std::move(what)), status(status_) {}
    int status;
};

// Releases an in-flight slot on scope exit.
class SlotGuard {
public:
    explicit SlotGuard(std::counting_semaphore<4096>& sem) : sem_(sem) { sem_.acquire(); }
    ~SlotGuard() { sem_.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::counting_semaphore<4096>& sem_;
};

}  // namespace

std::string extract_completion_text(const std::string& body) {
    const auto parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw LlmError(LlmError::Kind::MalformedResponse, "response is not a JSON object: " + excerpt(body));
    auto choices = parsed.find("choices");
    if (choices == parsed.end() || !choices->is_array() || choices->empty())
        throw LlmError(LlmError::Kind::MalformedResponse, "response has no choices: " + excerpt(body));
    const auto& first = (*choices)[0];
    if (!first.is_object() || !first.contains("message") || !first["message"].is_object())
        throw LlmError(LlmError::Kind::MalformedResponse, "choice has no message: " + excerpt(body));
    const auto& content = first["message"]["content"];
    if (content.is_null()) return {};
    if (!content.is_string())
        throw LlmError(LlmError::Kind::MalformedResponse, "message content is not text: " + excerpt(body));
    return content.get<std::string>();
}

HttpPort::HttpPort(EndpointConfig config)
    : config_(std::move(config)), in_flight_(std::max(1, config_.max_in_flight)) {
    if (config_.url.empty()) throw std::invalid_argument("HttpPort: endpoint URL not configured");
    const auto scheme_end = config_.url.find("://");
    const auto path_start = config_.url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    origin_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? std::string() : config_.url.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    if (!path_.ends_with(kCompletionsPath)) path_ += kCompletionsPath;
}

HttpPort::~HttpPort() = default;

std::string HttpPort::attempt(const std::string& body, const std::string& api_key) {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    auto result = client.Post(path_, headers, body, "application/json");
    if (!result) throw Retryable("transport error: " + httplib::to_string(result.error()), 0);
    const int status = result->status;
    if (status == 401 || status == 403) {
        if (api_key.empty())
            throw LlmError(LlmError::Kind::AuthMissing,
                           "endpoint requires authentication and $" + config_.api_key_env + " is not set", status);
        throw LlmError(LlmError::Kind::Transport, "authentication rejected: HTTP " + std::to_string(status), status);
    }
    if (transient_status(status)) throw Retryable("HTTP " + std::to_string(status), status);
    if (status < 200 || status >= 300)
        throw LlmError(LlmError::Kind::Transport, "HTTP " + std::to_string(status) + ": " + excerpt(result->body),
                       status);
    return result->body;
}

std::string HttpPort::complete(const ChatRequest& request) {
    std::string api_key;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key = key;
    }
    if (config_.require_auth && api_key.empty())
        throw LlmError(LlmError::Kind::AuthMissing, "$" + config_.api_key_env + " is not set");

    const json payload{{"model", request.model.empty() ? config_.model : request.model},
                       {"messages", json::array({json{{"role", "system"}, {"content", request.system}},
                                                 json{{"role", "user"}, {"content", request.user}}})},
                       {"temperature", request.temperature},
                       {"max_tokens", request.max_tokens}};
    const std::string body = payload.dump();

    SlotGuard slot(in_flight_);
    calls_.fetch_add(1);
    auto backoff = config_.initial_backoff;
    for (int tries = 0;; ++tries) {
        try {
            const std::string response = attempt(body, api_key);
            std::string text = extract_completion_text(response);
            const auto parsed = json::parse(response, nullptr, false);
            if (parsed.contains("usage") && parsed["usage"].is_object()) {
                const auto& usage = parsed["usage"];
                if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number_unsigned())
                    prompt_tokens_.fetch_add(usage["prompt_tokens"].get<std::uint64_t>());
                if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number_unsigned())
                    completion_tokens_.fetch_add(usage["completion_tokens"].get<std::uint64_t>());
            }
            return text;
        } catch (const Retryable& e) {
            if (tries >= config_.max_retries)
                throw LlmError(LlmError::Kind::Transport,
                               std::string(e.what()) + " (after " + std::to_string(tries + 1) + " attempts)", e.status);
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<std::int64_t>(std::llround(static_cast<double>(backoff.count()) * config_.backoff_factor)));
        }
    }
}

Usage HttpPort::usage() const { return Usage{calls_.load(), prompt_tokens_.load(), completion_tokens_.load()}; }

}  // namespace tooldc
