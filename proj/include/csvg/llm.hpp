// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csvg {

enum class Role { System, User, Assistant };

std::string role_name(Role role);

struct ChatMessage {
  Role role;
  std::string content;
};

struct LlmConfig {
  std::string endpoint_url;
  std::string model_name = "gpt-4";
  double temperature = 0.0;
  int max_output_tokens = 2048;
  std::string api_key_env = "LLM_API_KEY";
  double timeout_seconds = 60.0;
  int retries = 0;  // extra attempts after a failed call (at most 1 is used)
  std::string audit_path;
};

class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prompt text lives in data files: system.txt plus example_NN.txt, each
// example holding one <[USER]> / <[ASSISTANT]> exchange.
struct PromptTemplates {
  std::string system;  // placeholders still in place
  std::vector<std::pair<std::string, std::string>> examples;  // user, assistant

  static PromptTemplates load(const std::string &dir);
};

// CSVG_PROMPT_DIR when set, the bundled data directory otherwise.
std::string default_prompt_dir();

// System message (placeholders substituted), the in-context exchanges, then
// the final user message for `query` over `labels`.
std::vector<ChatMessage> build_messages(const PromptTemplates &templates,
                                        const std::string &query,
                                        const std::vector<std::string> &labels);

// Strips a ``` fence when present, trims, and returns the program text.
std::string extract_program(std::string_view raw);

// One chat-completions call; returns the extracted program text. Throws
// LlmError on transport, protocol, or schema failures.
std::string generate_program(const LlmConfig &config, const PromptTemplates &templates,
                             const std::string &query,
                             const std::vector<std::string> &labels);

}  // namespace csvg
