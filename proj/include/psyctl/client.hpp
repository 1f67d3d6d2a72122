#pragma once

#include "psyctl/errors.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace psyctl::client {

struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 512;
  bool greedy = true;  // assessments default to deterministic decoding
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_multiplier = 2.0;
};

// One served chat-completions-style endpoint. `kind` selects the transport:
// "http" talks the wire protocol; "mock-assessment", "mock-generator" and
// "scripted" are offline stand-ins configured through `mock` (parsed by the
// transport factory in the runner).
struct EndpointConfig {
  std::string name;
  std::string kind = "http";
  std::string base_url;
  std::string model_name;
  std::string auth_env;  // env var holding the bearer token; never logged
  bool supports_system_prompt = true;
  DecodingParams decoding;
  double rate_limit_rps = 4.0;
  RetryPolicy retry;
  std::string mock;  // JSON blob of mock parameters, transport-specific
};

enum class Role { System, User, Assistant };
struct Message {
  Role role;
  std::string content;
};

std::string_view role_name(Role r);

enum class Placement { SystemPrompt, UserPrompt };

std::string_view placement_name(Placement p);
std::optional<Placement> placement_from_name(std::string_view name);

// A standing text injected on every request: a system message, or a prefix
// concatenated onto the first user message.
struct Injection {
  Placement placement = Placement::SystemPrompt;
  std::string text;
};

struct SessionConfig {
  EndpointConfig endpoint;
  std::vector<Injection> injections;
  // Free-form note, e.g. the claimed SFT control target behind a PISF
  // session. Recorded in run logs, never verified.
  std::string provenance;
};

// Fully materialized request messages: injections applied in order, system
// injections prepended, user injections prefixed onto the first user message.
std::vector<Message> materialize_messages(const SessionConfig& session,
                                          std::vector<Message> messages);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string complete(const SessionConfig& session,
                               const std::vector<Message>& messages) = 0;
};

struct RequestTrace {
  int attempts = 0;
  int final_status = 0;
  std::chrono::milliseconds total_backoff{0};
};

// Wire transport: POST {base_url}/chat/completions with
// {model, messages[{role,content}], temperature, max_tokens}, reads
// choices[0].message.content. Retries 429/5xx/network failures with bounded
// exponential backoff and enforces the endpoint's request-rate cap.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(EndpointConfig config);
  std::string complete(const SessionConfig& session,
                       const std::vector<Message>& messages) override;

  void set_observer(std::function<void(const RequestTrace&)> observer);

 private:
  void acquire_rate_slot();

  EndpointConfig config_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_slot_;
  std::function<void(const RequestTrace&)> observer_;
  std::mutex observer_mutex_;
};

// Thin façade over a transport: validates the system-prompt contract and
// applies session injections before dispatch. Copyable; all copies share the
// transport (and therefore its rate limiter).
class ChatClient {
 public:
  explicit ChatClient(std::shared_ptr<Transport> transport);

  std::string chat(const SessionConfig& session, std::vector<Message> messages) const;

  Transport& transport() const { return *transport_; }

 private:
  std::shared_ptr<Transport> transport_;
};

}  // namespace psyctl::client
