#include "trapdoc/llm_client.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "trapdoc/errors.hpp"

namespace trapdoc {

namespace {

using nlohmann::json;

// per-process cap on in-flight endpoint requests
std::counting_semaphore<64> g_inflight(4);

std::string run_stub(const LlmStub& stub, const std::vector<ChatMessage>& messages) {
    if (std::holds_alternative<StubFailAlways>(stub)) throw StubFail("stub configured to fail");
    if (const auto* fixed = std::get_if<StubFixedResponse>(&stub)) return fixed->text;
    const auto& echo = std::get<StubEchoWithMarker>(stub);
    // echo the last user message, prefixed with the marker
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->role == "user") return echo.marker + it->content;
    return echo.marker;
}

struct ParsedUrl {
    std::string origin;  // scheme://host:port
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) throw LlmUnavailable("malformed endpoint URL: " + url);
    std::size_t path_at = url.find('/', scheme + 3);
    if (path_at == std::string::npos) return {url, "/"};
    return {url.substr(0, path_at), url.substr(path_at)};
}

}  // namespace

std::string complete(const std::vector<ChatMessage>& messages, const LlmConfig& config) {
    if (messages.empty()) throw LlmUnavailable("no messages to send");
    if (config.stub) return run_stub(*config.stub, messages);

    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
        throw MissingApiKey("environment variable " + config.api_key_env + " is not set");

    json body;
    body["model"] = config.model_name;
    body["temperature"] = config.temperature;
    body["max_tokens"] = config.max_output_tokens;
    json msgs = json::array();
    for (const ChatMessage& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(msgs);
    std::string payload = body.dump();

    ParsedUrl url = split_url(config.endpoint_url);
    httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

    g_inflight.acquire();
    struct Release {
        ~Release() { g_inflight.release(); }
    } release_guard;

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config.retries; ++attempt) {
        if (attempt > 0) {
            double delay = config.backoff_base_seconds * (1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client cli(url.origin);
        cli.set_connection_timeout(std::chrono::duration<double>(config.timeout_seconds));
        cli.set_read_timeout(std::chrono::duration<double>(config.timeout_seconds));
        auto res = cli.Post(url.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) throw HttpError(res->status, "HTTP " + std::to_string(res->status));
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) throw MalformedResponse("response is not JSON");
        try {
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            throw MalformedResponse("response lacks choices[0].message.content");
        }
    }
    throw LlmUnavailable("all attempts failed; last error: " + last_error);
}

}  // namespace trapdoc
