#pragma once

// Agent backed by an HTTP text-completion endpoint. Request and response
// shapes are configurable so that most completion APIs can be addressed
// without code changes.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
// <resolv.h> defines _res, which collides with Eigen parameter names.
#ifdef _res
#undef _res
#endif

#include "cogbench/agents/prompt_modes.hpp"
#include "cogbench/core/agent.hpp"
#include "cogbench/core/error.hpp"

namespace cogbench {

struct EndpointConfig {
    /// scheme://host[:port]
    std::string base_url = "http://127.0.0.1:8000";
    std::string path = "/v1/completions";
    std::string model_name;
    double timeout_seconds = 60.0;
    double temperature = 0.0;
    /// Token budget in base mode, where a single token answers the query.
    int max_tokens_base = 1;
    /// Token budget when the agent is asked to reason first.
    int max_tokens_reasoning = 300;
    /// Attempts per request, counting the first one.
    int retry_budget = 5;
    int min_interval_ms = 0;
    int backoff_initial_ms = 500;
    double backoff_factor = 2.0;
    std::string prompt_field = "prompt";
    std::string model_field = "model";
    std::string temperature_field = "temperature";
    std::string max_tokens_field = "max_tokens";
    /// JSON pointer to the completion text in the response body.
    std::string response_pointer = "/choices/0/text";
    /// Merged into every request body.
    json extra_body = json::object();
    /// Environment variable holding a bearer token; unset or empty means no header.
    std::string api_key_env = "COGBENCH_API_KEY";
    /// Wrapped around the rendered prompt, e.g. a chat template.
    std::string prompt_prefix;
    std::string prompt_suffix;
    /// When non-empty, every request and response is appended here as JSONL.
    std::string audit_log;

    void validate() const {
        if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
        if (!(temperature >= 0.0)) throw ConfigError("endpoint temperature must be >= 0");
        if (max_tokens_base < 1 || max_tokens_reasoning < 1) throw ConfigError("endpoint max_tokens must be >= 1");
        if (retry_budget < 1) throw ConfigError("endpoint retry_budget must be >= 1");
        if (!(timeout_seconds > 0.0)) throw ConfigError("endpoint timeout must be > 0");
        if (!(backoff_factor >= 1.0) || backoff_initial_ms < 0 || min_interval_ms < 0)
            throw ConfigError("endpoint backoff settings are invalid");
        try {
            (void)json::json_pointer(response_pointer);
        } catch (const json::exception& e) {
            throw ConfigError("endpoint response_pointer: " + std::string(e.what()));
        }
    }
};

inline void from_json(const json& j, EndpointConfig& c) {
    EndpointConfig d;
    c.base_url = j.value("base_url", d.base_url);
    c.path = j.value("path", d.path);
    c.model_name = j.value("model_name", d.model_name);
    c.timeout_seconds = j.value("timeout_seconds", d.timeout_seconds);
    c.temperature = j.value("temperature", d.temperature);
    c.max_tokens_base = j.value("max_tokens_base", d.max_tokens_base);
    c.max_tokens_reasoning = j.value("max_tokens_reasoning", d.max_tokens_reasoning);
    c.retry_budget = j.value("retry_budget", d.retry_budget);
    c.min_interval_ms = j.value("min_interval_ms", d.min_interval_ms);
    c.backoff_initial_ms = j.value("backoff_initial_ms", d.backoff_initial_ms);
    c.backoff_factor = j.value("backoff_factor", d.backoff_factor);
    c.prompt_field = j.value("prompt_field", d.prompt_field);
    c.model_field = j.value("model_field", d.model_field);
    c.temperature_field = j.value("temperature_field", d.temperature_field);
    c.max_tokens_field = j.value("max_tokens_field", d.max_tokens_field);
    c.response_pointer = j.value("response_pointer", d.response_pointer);
    c.extra_body = j.value("extra_body", json::object());
    c.api_key_env = j.value("api_key_env", d.api_key_env);
    c.prompt_prefix = j.value("prompt_prefix", d.prompt_prefix);
    c.prompt_suffix = j.value("prompt_suffix", d.prompt_suffix);
    c.audit_log = j.value("audit_log", d.audit_log);
}

inline void to_json(json& j, const EndpointConfig& c) {
    j = json{{"base_url", c.base_url},
             {"path", c.path},
             {"model_name", c.model_name},
             {"timeout_seconds", c.timeout_seconds},
             {"temperature", c.temperature},
             {"max_tokens_base", c.max_tokens_base},
             {"max_tokens_reasoning", c.max_tokens_reasoning},
             {"retry_budget", c.retry_budget},
             {"min_interval_ms", c.min_interval_ms},
             {"backoff_initial_ms", c.backoff_initial_ms},
             {"backoff_factor", c.backoff_factor},
             {"prompt_field", c.prompt_field},
             {"model_field", c.model_field},
             {"temperature_field", c.temperature_field},
             {"max_tokens_field", c.max_tokens_field},
             {"response_pointer", c.response_pointer},
             {"extra_body", c.extra_body},
             {"api_key_env", c.api_key_env},
             {"prompt_prefix", c.prompt_prefix},
             {"prompt_suffix", c.prompt_suffix},
             {"audit_log", c.audit_log}};
}

class EndpointAgent final : public Agent {
public:
    explicit EndpointAgent(EndpointConfig cfg) : cfg_(std::move(cfg)), client_(cfg_.base_url) {
        cfg_.validate();
        const auto timeout = std::chrono::milliseconds(static_cast<long>(cfg_.timeout_seconds * 1000.0));
        client_.set_connection_timeout(timeout);
        client_.set_read_timeout(timeout);
        client_.set_write_timeout(timeout);
        if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
            client_.set_bearer_token_auth(key);
    }

    std::string describe() const override { return "endpoint:" + cfg_.model_name; }

    json request_body(const ChoiceQuery& q, PromptMode mode) const {
        json body = cfg_.extra_body;
        body[cfg_.prompt_field] = cfg_.prompt_prefix + render_prompt(q, mode) + cfg_.prompt_suffix;
        if (!cfg_.model_name.empty()) body[cfg_.model_field] = cfg_.model_name;
        body[cfg_.temperature_field] = cfg_.temperature;
        body[cfg_.max_tokens_field] = mode == PromptMode::base ? cfg_.max_tokens_base : cfg_.max_tokens_reasoning;
        return body;
    }

    std::string respond(const TrialContext& ctx) override {
        const std::string payload = request_body(ctx.query, ctx.mode).dump();
        std::string last_error;
        double wait_ms = cfg_.backoff_initial_ms;
        for (int attempt = 1; attempt <= cfg_.retry_budget; ++attempt) {
            pace();
            auto res = client_.Post(cfg_.path, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
            } else if (res->status >= 200 && res->status < 300) {
                std::string text;
                try {
                    text = json::parse(res->body).at(json::json_pointer(cfg_.response_pointer)).get<std::string>();
                } catch (const json::exception& e) {
                    throw EndpointError("malformed endpoint response: " + std::string(e.what()));
                }
                audit(payload, text, res->status);
                return text;
            } else {
                last_error = "HTTP " + std::to_string(res->status);
                audit(payload, res->body, res->status);
                // Client errors other than timeouts and rate limits will not improve on retry.
                if (res->status >= 400 && res->status < 500 && res->status != 408 && res->status != 429)
                    throw EndpointError("endpoint rejected request: " + last_error);
            }
            if (attempt < cfg_.retry_budget) {
                std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(wait_ms)));
                wait_ms *= cfg_.backoff_factor;
            }
        }
        throw EndpointError("endpoint failed after " + std::to_string(cfg_.retry_budget) + " attempts: " + last_error);
    }

private:
    void pace() {
        if (cfg_.min_interval_ms <= 0) return;
        const auto now = std::chrono::steady_clock::now();
        const auto earliest = last_request_ + std::chrono::milliseconds(cfg_.min_interval_ms);
        if (now < earliest) std::this_thread::sleep_for(earliest - now);
        last_request_ = std::chrono::steady_clock::now();
    }

    void audit(const std::string& payload, const std::string& reply, int status) {
        if (cfg_.audit_log.empty()) return;
        static std::mutex mu;
        std::lock_guard lock(mu);
        std::ofstream out(cfg_.audit_log, std::ios::app);
        out << json{{"request", json::parse(payload)}, {"status", status}, {"reply", reply}}.dump() << '\n';
    }

    EndpointConfig cfg_;
    httplib::Client client_;
    std::chrono::steady_clock::time_point last_request_{};
};

}  // namespace cogbench
