#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace ragbench::net {

struct HttpEndpoint {
    std::string base_url; // scheme://host:port
    std::string api_key;  // sent as a bearer token when non-empty
    int timeout_seconds = 30;
    int retry_budget = 3; // retries after the first attempt
    int backoff_ms = 50;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// POSTs a JSON body and returns the final response. Transport failures and
// retryable statuses (429, 500, 502, 503, 504) are retried with linear
// backoff until the budget runs out, then raise Error::service
// ("ServiceUnavailable"). Other statuses are returned for the caller to
// classify. `what` names the service in error messages.
HttpResponse post_json(const HttpEndpoint& endpoint, const std::string& path,
                       const nlohmann::json& body, const std::string& what);

// Reads "<NAME>_URL" / "<NAME>_KEY" environment variables into an endpoint;
// url_required controls whether a missing URL is a config error.
HttpEndpoint endpoint_from_env(const std::string& name_prefix, bool url_required);

} // namespace ragbench::net
