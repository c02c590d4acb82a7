#include "pde/endpoint.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pde/util.hpp"

namespace pde {

using Json = nlohmann::ordered_json;

std::string_view to_string(Role role) {
  switch (role) {
  case Role::extractor: return "extractor";
  case Role::generator: return "generator";
  case Role::refiner: return "refiner";
  }
  return "generator";
}

// ---------------------------------------------------------------------------
// ScriptedEndpoint.

ScriptedEndpoint::ScriptedEndpoint(std::vector<std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

std::string ScriptedEndpoint::complete(const std::string& prompt, Role role) {
  if (responses_.empty())
    throw EndpointError("scripted endpoint exhausted after " +
                        std::to_string(calls_.size()) + " calls");
  std::string response = std::move(responses_.front());
  responses_.pop_front();
  calls_.push_back({role, prompt, response});
  return response;
}

// ---------------------------------------------------------------------------
// RecordingEndpoint.

RecordingEndpoint::RecordingEndpoint(GenerationEndpoint& inner, std::string path)
    : inner_(inner), path_(std::move(path)) {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw EndpointError("cannot open replay file for writing: " + path_);
}

std::string RecordingEndpoint::complete(const std::string& prompt, Role role) {
  std::string response = inner_.complete(prompt, role);
  Json line = {{"role", to_string(role)},
               {"prompt_sha256", sha256_hex(prompt)},
               {"response", response}};
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw EndpointError("cannot append to replay file: " + path_);
  out << line.dump() << '\n';
  if (!out.flush()) throw EndpointError("write failed on replay file: " + path_);
  return response;
}

// ---------------------------------------------------------------------------
// ReplayEndpoint.

ReplayEndpoint::ReplayEndpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EndpointError("cannot open replay file: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json doc;
    try {
      doc = Json::parse(line);
      entries_.push_back({doc.at("role").get<std::string>(),
                          doc.at("prompt_sha256").get<std::string>(),
                          doc.at("response").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw EndpointError("malformed replay line " + std::to_string(lineno) +
                          " in " + path + ": " + e.what());
    }
  }
}

std::string ReplayEndpoint::complete(const std::string& prompt, Role role) {
  if (next_ >= entries_.size())
    throw EndpointError("replay exhausted: no recorded call #" +
                        std::to_string(next_ + 1));
  const Entry& entry = entries_[next_];
  if (entry.role != to_string(role))
    throw EndpointError("replay role mismatch at call #" +
                        std::to_string(next_ + 1) + ": recorded " + entry.role +
                        ", requested " + std::string(to_string(role)));
  const std::string hash = sha256_hex(prompt);
  if (entry.prompt_sha256 != hash)
    throw EndpointError("replay prompt mismatch at call #" +
                        std::to_string(next_ + 1) + " (role " + entry.role +
                        "): recorded sha256 " + entry.prompt_sha256 +
                        ", rebuilt prompt hashes to " + hash);
  ++next_;
  return entry.response;
}

// ---------------------------------------------------------------------------
// HttpEndpoint.

HttpEndpoint::HttpEndpoint(std::string base_url, std::string model)
    : base_url_(std::move(base_url)), model_(std::move(model)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string HttpEndpoint::complete(const std::string& prompt, Role role) {
  (void)role; // same chat route for every role; role is a prompt-level notion
  const char* key = std::getenv("IFS_LLM_API_KEY");
  if (!key || !*key)
    throw EndpointError("IFS_LLM_API_KEY is not set; required for HTTP endpoints");

  // Split scheme://host[:port] from an optional path prefix.
  std::string origin = base_url_;
  std::string prefix;
  size_t scheme = base_url_.find("://");
  if (scheme != std::string::npos) {
    size_t slash = base_url_.find('/', scheme + 3);
    if (slash != std::string::npos) {
      origin = base_url_.substr(0, slash);
      prefix = base_url_.substr(slash);
    }
  }

  Json body = {{"model", model_},
               {"temperature", 0},
               {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})}};

  httplib::Client client(origin);
  client.set_connection_timeout(30);
  client.set_read_timeout(300);
  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
  httplib::Result res =
      client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (!res)
    throw EndpointError("HTTP request to " + base_url_ +
                        " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw EndpointError("HTTP endpoint returned status " + std::to_string(res->status) +
                        ": " + res->body.substr(0, 512));
  try {
    Json doc = Json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(std::string("malformed chat-completions response: ") + e.what());
  }
}

} // namespace pde
