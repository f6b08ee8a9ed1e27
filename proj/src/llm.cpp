// SPDX-License-Identifier: Apache-2.0
#include "csvg/llm.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "csvg/csp.hpp"

#ifndef CSVG_DEFAULT_PROMPT_DIR
#define CSVG_DEFAULT_PROMPT_DIR "data/prompts"
#endif

namespace csvg {

std::string role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "?";
}

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LlmError("cannot open prompt template '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string trim_blank(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == '\n' || s[b] == '\r' || s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == '\n' || s[e - 1] == '\r' || s[e - 1] == ' ' || s[e - 1] == '\t'))
    --e;
  return std::string(s.substr(b, e - b));
}

void replace_all(std::string &text, const std::string &needle, const std::string &with) {
  std::size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    text.replace(at, needle.size(), with);
    at += with.size();
  }
}

std::string iso_timestamp() {
  using namespace std::chrono;
  auto now = system_clock::now();
  std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::mutex audit_mutex;

void audit(const LlmConfig &config, const nlohmann::ordered_json &entry) {
  if (config.audit_path.empty()) return;
  std::lock_guard<std::mutex> lock(audit_mutex);
  std::ofstream out(config.audit_path, std::ios::app);
  if (out) out << entry.dump() << "\n";
}

struct Endpoint {
  std::string scheme;
  std::string host_port;
  std::string path;
};

Endpoint split_url(const std::string &url) {
  Endpoint ep;
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw LlmError("endpoint URL '" + url + "' has no scheme");
  ep.scheme = url.substr(0, scheme_end);
  if (ep.scheme != "http" && ep.scheme != "https")
    throw LlmError("endpoint URL scheme '" + ep.scheme + "' is not supported");
  std::size_t rest = scheme_end + 3;
  std::size_t slash = url.find('/', rest);
  if (slash == std::string::npos) {
    ep.host_port = url.substr(rest);
    ep.path = "/";
  } else {
    ep.host_port = url.substr(rest, slash - rest);
    ep.path = url.substr(slash);
  }
  if (ep.host_port.empty()) throw LlmError("endpoint URL '" + url + "' has no host");
  return ep;
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::string &dir) {
  namespace fs = std::filesystem;
  PromptTemplates templates;

  std::string system_raw = read_file((fs::path(dir) / "system.txt").string());
  const std::string sys_marker = "<[SYSTEM]>";
  std::size_t at = system_raw.find(sys_marker);
  if (at == std::string::npos)
    throw LlmError("system template is missing the <[SYSTEM]> marker");
  templates.system = trim_blank(system_raw.substr(at + sys_marker.size()));

  for (int i = 1;; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "example_%02d.txt", i);
    fs::path path = fs::path(dir) / name;
    if (!fs::exists(path)) break;
    std::string raw = read_file(path.string());
    const std::string user_marker = "<[USER]>";
    const std::string assistant_marker = "<[ASSISTANT]>";
    std::size_t u = raw.find(user_marker);
    std::size_t a = raw.find(assistant_marker);
    if (u == std::string::npos || a == std::string::npos || a < u)
      throw LlmError(std::string("example template '") + name +
                     "' needs <[USER]> followed by <[ASSISTANT]>");
    std::string user = trim_blank(raw.substr(u + user_marker.size(), a - u - user_marker.size()));
    std::string assistant = trim_blank(raw.substr(a + assistant_marker.size()));
    templates.examples.emplace_back(std::move(user), std::move(assistant));
  }
  if (templates.examples.empty())
    throw LlmError("no example templates found in '" + dir + "'");
  return templates;
}

std::string default_prompt_dir() {
  if (const char *env = std::getenv("CSVG_PROMPT_DIR"); env && *env) return env;
  return CSVG_DEFAULT_PROMPT_DIR;
}

std::vector<ChatMessage> build_messages(const PromptTemplates &templates,
                                        const std::string &query,
                                        const std::vector<std::string> &labels) {
  std::string system = templates.system;
  replace_all(system, "<[REGISTERED_FUNCTIONS_PLACEHOLDER]>", registry_signatures());
  replace_all(system, "<[REGISTERED_SCORE_FUNCTIONS_PLACEHOLDER]>", score_function_listing());
  if (system.find("<[") != std::string::npos)
    throw LlmError("system template contains an unknown placeholder");

  std::vector<ChatMessage> messages;
  messages.push_back({Role::System, std::move(system)});
  for (const auto &[user, assistant] : templates.examples) {
    messages.push_back({Role::User, user});
    messages.push_back({Role::Assistant, assistant});
  }

  std::ostringstream final_user;
  final_user << "QUERY:\n" << query << "\n\nRELEVANT OBJECT LABELS:";
  for (std::size_t i = 0; i < labels.size(); ++i)
    final_user << "\n[" << i << "] " << labels[i];
  messages.push_back({Role::User, final_user.str()});
  return messages;
}

std::string extract_program(std::string_view raw) {
  std::string text = trim_blank(raw);
  std::size_t fence = text.find("```");
  if (fence != std::string::npos) {
    std::size_t body = text.find('\n', fence);
    if (body == std::string::npos) return "";
    std::size_t close = text.find("```", body);
    std::string inner = close == std::string::npos
                            ? text.substr(body + 1)
                            : text.substr(body + 1, close - body - 1);
    return trim_blank(inner);
  }
  return text;
}

std::string generate_program(const LlmConfig &config, const PromptTemplates &templates,
                             const std::string &query,
                             const std::vector<std::string> &labels) {
  if (config.temperature < 0.0) throw LlmError("temperature cannot be negative");
  Endpoint ep = split_url(config.endpoint_url);

  nlohmann::ordered_json request;
  request["model"] = config.model_name;
  auto messages = nlohmann::ordered_json::array();
  for (const ChatMessage &m : build_messages(templates, query, labels)) {
    nlohmann::ordered_json msg;
    msg["role"] = role_name(m.role);
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  request["messages"] = std::move(messages);
  request["temperature"] = config.temperature;
  request["max_tokens"] = config.max_output_tokens;
  std::string body = request.dump();

  httplib::Headers headers;
  if (!config.api_key_env.empty()) {
    if (const char *key = std::getenv(config.api_key_env.c_str()); key && *key)
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  int attempts = 1 + (config.retries > 0 ? 1 : 0);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    nlohmann::ordered_json entry;
    entry["ts_request"] = iso_timestamp();
    entry["endpoint"] = config.endpoint_url;
    entry["request"] = request;

    httplib::Result res(nullptr, httplib::Error::Unknown);
    if (ep.scheme == "https") {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
      httplib::SSLClient client(ep.host_port);
      client.set_connection_timeout(std::chrono::duration<double>(config.timeout_seconds));
      client.set_read_timeout(std::chrono::duration<double>(config.timeout_seconds));
      client.set_write_timeout(std::chrono::duration<double>(config.timeout_seconds));
      res = client.Post(ep.path, headers, body, "application/json");
#else
      throw LlmError("https endpoints need TLS support, which is not built in");
#endif
    } else {
      httplib::Client client(ep.host_port);
      client.set_connection_timeout(std::chrono::duration<double>(config.timeout_seconds));
      client.set_read_timeout(std::chrono::duration<double>(config.timeout_seconds));
      client.set_write_timeout(std::chrono::duration<double>(config.timeout_seconds));
      res = client.Post(ep.path, headers, body, "application/json");
    }

    entry["ts_response"] = iso_timestamp();
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      entry["error"] = last_error;
      audit(config, entry);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body;
      entry["error"] = last_error;
      audit(config, entry);
      continue;
    }

    nlohmann::json response;
    try {
      response = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception &e) {
      last_error = std::string("response is not valid JSON: ") + e.what();
      entry["error"] = last_error;
      audit(config, entry);
      continue;
    }
    entry["response"] = response;
    audit(config, entry);

    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty() || !response["choices"][0].contains("message") ||
        !response["choices"][0]["message"].contains("content") ||
        !response["choices"][0]["message"]["content"].is_string())
      throw LlmError("response lacks choices[0].message.content");

    std::string program =
        extract_program(response["choices"][0]["message"]["content"].get<std::string>());
    if (program.empty()) throw LlmError("the model returned an empty program");
    return program;
  }
  throw LlmError(last_error);
}

}  // namespace csvg
