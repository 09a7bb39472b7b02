#include "ragbench/net/http.hpp"

#include "ragbench/core/error.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace ragbench::net {

namespace {

bool retryable(int status) {
    return status == 429 || status == 500 || status == 502 || status == 503 || status == 504;
}

} // namespace

HttpResponse post_json(const HttpEndpoint& endpoint, const std::string& path,
                       const nlohmann::json& body, const std::string& what) {
    if (endpoint.base_url.empty()) {
        throw Error::config("MissingEndpoint", what + " endpoint URL is not configured");
    }
    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(endpoint.timeout_seconds, 0);
    client.set_read_timeout(endpoint.timeout_seconds, 0);
    client.set_write_timeout(endpoint.timeout_seconds, 0);

    httplib::Headers headers;
    if (!endpoint.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + endpoint.api_key);
    }
    const auto payload = body.dump();

    std::string last_failure;
    const int attempts = endpoint.retry_budget + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0 && endpoint.backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(endpoint.backoff_ms * attempt));
        }
        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_failure = "transport error (" + httplib::to_string(result.error()) + ")";
            continue;
        }
        if (retryable(result->status)) {
            last_failure = "status " + std::to_string(result->status);
            continue;
        }
        return {result->status, result->body};
    }
    throw Error::service("ServiceUnavailable", what + " at " + endpoint.base_url + path +
                                                   " failed after " + std::to_string(attempts) +
                                                   " attempts: " + last_failure);
}

HttpEndpoint endpoint_from_env(const std::string& name_prefix, bool url_required) {
    HttpEndpoint endpoint;
    if (const char* url = std::getenv((name_prefix + "_URL").c_str())) {
        endpoint.base_url = url;
    }
    if (const char* key = std::getenv((name_prefix + "_KEY").c_str())) {
        endpoint.api_key = key;
    }
    if (url_required && endpoint.base_url.empty()) {
        throw Error::config("MissingEndpoint",
                            "environment variable " + name_prefix + "_URL is not set");
    }
    return endpoint;
}

} // namespace ragbench::net
