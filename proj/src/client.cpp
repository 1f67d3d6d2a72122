#include "psyctl/client.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace psyctl::client {

using json = nlohmann::json;

std::string_view role_name(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view placement_name(Placement p) {
  return p == Placement::SystemPrompt ? "system" : "user";
}

std::optional<Placement> placement_from_name(std::string_view name) {
  if (name == "system") return Placement::SystemPrompt;
  if (name == "user") return Placement::UserPrompt;
  return std::nullopt;
}

std::vector<Message> materialize_messages(const SessionConfig& session,
                                          std::vector<Message> messages) {
  std::vector<Message> system_prefix;
  std::vector<std::string> user_prefixes;
  for (const Injection& injection : session.injections) {
    if (injection.text.empty()) continue;
    if (injection.placement == Placement::SystemPrompt) {
      system_prefix.push_back({Role::System, injection.text});
    } else {
      user_prefixes.push_back(injection.text);
    }
  }
  if (!user_prefixes.empty()) {
    auto first_user = std::find_if(messages.begin(), messages.end(),
                                   [](const Message& m) { return m.role == Role::User; });
    std::string prefix;
    for (const std::string& text : user_prefixes) {
      prefix += text;
      prefix += "\n\n";
    }
    if (first_user == messages.end()) {
      messages.push_back({Role::User, prefix});
    } else {
      first_user->content = prefix + first_user->content;
    }
  }
  messages.insert(messages.begin(), system_prefix.begin(), system_prefix.end());
  return messages;
}

namespace {

struct ParsedUrl {
  std::string host_and_scheme;  // "http://127.0.0.1:8080"
  std::string path_prefix;      // "/v1" or ""
};

ParsedUrl split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw PreconditionError("endpoint base_url must include a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

bool retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

HttpTransport::HttpTransport(EndpointConfig config)
    : config_(std::move(config)), next_slot_(std::chrono::steady_clock::now()) {
  if (config_.rate_limit_rps <= 0) {
    throw PreconditionError("rate_limit_rps must be positive");
  }
  if (config_.retry.max_attempts < 1) {
    throw PreconditionError("retry.max_attempts must be at least 1");
  }
}

void HttpTransport::set_observer(std::function<void(const RequestTrace&)> observer) {
  std::lock_guard lock(observer_mutex_);
  observer_ = std::move(observer);
}

void HttpTransport::acquire_rate_slot() {
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / config_.rate_limit_rps));
  std::chrono::steady_clock::time_point wake;
  {
    std::lock_guard lock(rate_mutex_);
    const auto now = std::chrono::steady_clock::now();
    wake = std::max(now, next_slot_);
    next_slot_ = wake + interval;
  }
  std::this_thread::sleep_until(wake);
}

std::string HttpTransport::complete(const SessionConfig& session,
                                    const std::vector<Message>& messages) {
  const auto [host, prefix] = split_base_url(config_.base_url);

  json body;
  body["model"] = config_.model_name;
  body["messages"] = json::array();
  for (const Message& m : messages) {
    body["messages"].push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  body["temperature"] = config_.decoding.greedy ? 0.0 : config_.decoding.temperature;
  body["max_tokens"] = config_.decoding.max_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    const char* token = std::getenv(config_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw AuthError("auth env var not set: " + config_.auth_env);
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  RequestTrace trace;
  auto backoff = config_.retry.initial_backoff;
  std::string last_failure = "no attempt made";
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    trace.attempts = attempt;
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      trace.total_backoff += backoff;
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) *
                                 config_.retry.backoff_multiplier));
    }
    acquire_rate_slot();

    httplib::Client http(host);
    http.set_connection_timeout(10);
    http.set_read_timeout(120);
    auto res = http.Post(prefix + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_failure = "network error: " + httplib::to_string(res.error());
      continue;
    }
    trace.final_status = res->status;
    if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint " + config_.name + " rejected credentials (HTTP " +
                      std::to_string(res->status) + ")");
    }
    if (retryable_status(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw EndpointError("endpoint " + config_.name + " returned HTTP " +
                          std::to_string(res->status));
    }

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("reply is not JSON: ") + e.what());
    }
    if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty() ||
        !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content") ||
        !reply["choices"][0]["message"]["content"].is_string()) {
      throw SchemaError("reply lacks choices[0].message.content");
    }
    {
      std::lock_guard lock(observer_mutex_);
      if (observer_) observer_(trace);
    }
    (void)session;
    return reply["choices"][0]["message"]["content"].get<std::string>();
  }

  {
    std::lock_guard lock(observer_mutex_);
    if (observer_) observer_(trace);
  }
  throw EndpointError("endpoint " + config_.name + " failed after " +
                      std::to_string(config_.retry.max_attempts) + " attempts (" + last_failure +
                      ")");
}

ChatClient::ChatClient(std::shared_ptr<Transport> transport) : transport_(std::move(transport)) {
  if (!transport_) throw PreconditionError("ChatClient requires a transport");
}

std::string ChatClient::chat(const SessionConfig& session, std::vector<Message> messages) const {
  if (messages.empty()) throw PreconditionError("chat requires at least one message");
  if (!session.endpoint.supports_system_prompt) {
    for (const Message& m : messages) {
      if (m.role == Role::System) {
        throw PreconditionError("endpoint " + session.endpoint.name +
                                " does not support system messages");
      }
    }
    for (const Injection& injection : session.injections) {
      if (injection.placement == Placement::SystemPrompt && !injection.text.empty()) {
        throw PlacementUnsupported("endpoint " + session.endpoint.name +
                                   " does not support system-prompt injection");
      }
    }
  }
  return transport_->complete(session, materialize_messages(session, std::move(messages)));
}

}  // namespace psyctl::client
