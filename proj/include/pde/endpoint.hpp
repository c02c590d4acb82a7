#pragma once

// Text-generation endpoints. The pipeline talks to one abstract interface;
// implementations cover scripted tests, JSONL record/replay, and an
// OpenAI-style chat-completions HTTP service. Nothing above this layer knows
// about transports.

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "pde/errors.hpp"

namespace pde {

enum class Role { extractor, generator, refiner };

std::string_view to_string(Role role);

class GenerationEndpoint {
public:
  virtual ~GenerationEndpoint() = default;

  // Returns the completion for `prompt`. Throws EndpointError on any failure
  // (transport, exhaustion, replay mismatch).
  virtual std::string complete(const std::string& prompt, Role role) = 0;
};

// ---------------------------------------------------------------------------
// Scripted endpoint: canned responses in FIFO order, with full call capture
// so tests can assert on the prompts the pipeline actually built.

struct EndpointCall {
  Role role = Role::generator;
  std::string prompt;
  std::string response;
};

class ScriptedEndpoint final : public GenerationEndpoint {
public:
  explicit ScriptedEndpoint(std::vector<std::string> responses);

  std::string complete(const std::string& prompt, Role role) override;

  const std::vector<EndpointCall>& calls() const { return calls_; }

private:
  std::deque<std::string> responses_;
  std::vector<EndpointCall> calls_;
};

// ---------------------------------------------------------------------------
// Record / replay. The replay file is JSONL; each line stores
// {"role", "prompt_sha256", "response"}. Prompts are stored by hash: replay
// verifies that the caller rebuilt byte-identical prompts in the same order.

class RecordingEndpoint final : public GenerationEndpoint {
public:
  // Wraps `inner`, appending one line per successful call to `path`.
  // Truncates any existing file at construction.
  RecordingEndpoint(GenerationEndpoint& inner, std::string path);

  std::string complete(const std::string& prompt, Role role) override;

private:
  GenerationEndpoint& inner_;
  std::string path_;
};

class ReplayEndpoint final : public GenerationEndpoint {
public:
  explicit ReplayEndpoint(const std::string& path);

  // Returns the recorded response iff role and prompt hash match the next
  // recorded call; otherwise throws EndpointError.
  std::string complete(const std::string& prompt, Role role) override;

  size_t remaining() const { return entries_.size() - next_; }

private:
  struct Entry {
    std::string role;
    std::string prompt_sha256;
    std::string response;
  };
  std::vector<Entry> entries_;
  size_t next_ = 0;
};

// ---------------------------------------------------------------------------
// HTTP endpoint: POST {base_url}/chat/completions with an OpenAI-style body
// at temperature 0; bearer credential read from IFS_LLM_API_KEY at call time.

class HttpEndpoint final : public GenerationEndpoint {
public:
  HttpEndpoint(std::string base_url, std::string model);

  std::string complete(const std::string& prompt, Role role) override;

private:
  std::string base_url_; // scheme://host[:port][/prefix], no trailing slash
  std::string model_;
};

} // namespace pde
