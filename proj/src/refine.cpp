#include "pde/refine.hpp"

#include <cctype>
#include <utility>

#include "pde/hit.hpp"
#include "pde/reconstruct.hpp"
#include "pde/util.hpp"

namespace pde {

namespace {

std::string trim(const std::string& text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

// Whether the line spanning [pos, eol) opens or closes a ``` fence.
bool is_fence_line(const std::string& text, size_t pos, size_t eol) {
  size_t i = pos;
  while (i < eol && (text[i] == ' ' || text[i] == '\t')) ++i;
  return eol - i >= 3 && text.compare(i, 3, "```") == 0;
}

// The JSON object inside a response: fence-stripped, then the outermost
// {...} span so surrounding prose never reaches the parser.
std::string json_payload(const std::string& response) {
  std::string body = strip_code_fences(response);
  const size_t open = body.find('{');
  const size_t close = body.rfind('}');
  if (open != std::string::npos && close != std::string::npos && close > open)
    return body.substr(open, close - open + 1);
  return body;
}

// The input-file text inside a response: fence-stripped, then everything
// from the first block-header line on (drops "Here is the file:" preambles).
std::string input_payload(const std::string& response) {
  std::string body = strip_code_fences(response);
  size_t pos = 0;
  while (pos <= body.size()) {
    const size_t eol = body.find('\n', pos);
    const size_t end = (eol == std::string::npos) ? body.size() : eol;
    size_t i = pos;
    while (i < end && (body[i] == ' ' || body[i] == '\t')) ++i;
    if (i < end && body[i] == '[') return body.substr(pos);
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return body;
}

// template text + a labeled payload block.
std::string with_block(std::string tmpl, const std::string& heading,
                       const std::string& body) {
  if (!tmpl.empty() && tmpl.back() != '\n') tmpl += '\n';
  tmpl += '\n';
  tmpl += heading;
  tmpl += '\n';
  tmpl += body;
  if (body.empty() || body.back() != '\n') tmpl += '\n';
  return tmpl;
}

std::string fill_refine_template(std::string tmpl, const std::string& code,
                                 const std::string& report_json) {
  auto sub_once = [](std::string& s, std::string_view from, const std::string& to) {
    const size_t at = s.find(from);
    if (at != std::string::npos) s.replace(at, from.size(), to);
  };
  // The report placeholder sits after the code placeholder in the template,
  // so substituting the report first cannot plant an earlier "<code>".
  sub_once(tmpl, "<structured violation report>", report_json);
  sub_once(tmpl, "<code>", code);
  return tmpl;
}

// Forwards to the wrapped endpoint, counting completions that succeeded.
class CountingEndpoint final : public GenerationEndpoint {
public:
  CountingEndpoint(GenerationEndpoint& inner, int& counter)
      : inner_(inner), counter_(counter) {}

  std::string complete(const std::string& prompt, Role role) override {
    std::string out = inner_.complete(prompt, role);
    ++counter_;
    return out;
  }

private:
  GenerationEndpoint& inner_;
  int& counter_;
};

} // namespace

std::string_view to_string(Preset preset) {
  switch (preset) {
  case Preset::direct: return "direct";
  case Preset::specgen: return "specgen";
  case Preset::pde_refine: return "pde_refine";
  }
  return "pde_refine";
}

std::optional<Preset> preset_from_string(std::string_view name) {
  if (name == "direct") return Preset::direct;
  if (name == "specgen") return Preset::specgen;
  if (name == "pde_refine") return Preset::pde_refine;
  return std::nullopt;
}

std::string strip_code_fences(const std::string& text) {
  size_t pos = 0;
  size_t content_begin = std::string::npos;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    const size_t end = (eol == std::string::npos) ? text.size() : eol;
    if (is_fence_line(text, pos, end)) {
      if (content_begin == std::string::npos) {
        if (eol == std::string::npos) return ""; // opening fence is the last line
        content_begin = eol + 1;
      } else {
        return text.substr(content_begin, pos - content_begin);
      }
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  if (content_begin != std::string::npos) return text.substr(content_begin);
  return trim(text);
}

std::string load_template(const std::string& data_dir, const std::string& name) {
  return read_file(data_dir + "/prompts/" + name + ".txt");
}

PhysicsContract extract_contract(const std::string& description,
                                 GenerationEndpoint& endpoint,
                                 const std::string& data_dir) {
  const std::string prompt = with_block(load_template(data_dir, "extract"),
                                        "Problem description:", description);
  const std::string first = endpoint.complete(prompt, Role::extractor);
  try {
    return load_contract(json_payload(first));
  } catch (const SchemaError& e) {
    std::string retry = prompt;
    retry += "\nYour previous response could not be parsed as a physics contract: ";
    retry += e.what();
    retry += "\nReturn ONLY the corrected JSON object.\n";
    const std::string second = endpoint.complete(retry, Role::extractor);
    try {
      return load_contract(json_payload(second));
    } catch (const SchemaError& e2) {
      throw ExtractionError(
          std::string("contract extraction failed after re-ask: ") + e2.what());
    }
  }
}

std::string generate_code(const PhysicsContract& contract,
                          GenerationEndpoint& endpoint,
                          const std::string& data_dir) {
  const std::string prompt = with_block(load_template(data_dir, "generate"),
                                        "Physics contract:", save_contract(contract));
  return input_payload(endpoint.complete(prompt, Role::generator));
}

std::string refine_once(const std::string& code, const EvalReport& report,
                        GenerationEndpoint& endpoint, const std::string& data_dir) {
  const std::string prompt = fill_refine_template(
      load_template(data_dir, "refine"), code, report_to_json(report).dump(2));
  return input_payload(endpoint.complete(prompt, Role::refiner));
}

PipelineTrace run_pipeline(const std::string& description, EndpointSet endpoints,
                           const MappingRegistry& reg,
                           const PipelineOptions& options) {
  PipelineTrace trace;
  trace.preset = options.preset;

  CountingEndpoint extractor(*endpoints.extractor, trace.endpoint_calls);
  CountingEndpoint generator(*endpoints.generator, trace.endpoint_calls);
  CountingEndpoint refiner(*endpoints.refiner, trace.endpoint_calls);

  size_t best = 0;
  try {
    if (options.preset == Preset::direct) {
      const std::string prompt = with_block(load_template(options.data_dir, "generate"),
                                            "Problem description:", description);
      PipelineStep step;
      step.code = input_payload(generator.complete(prompt, Role::generator));
      trace.steps.push_back(std::move(step));
    } else {
      PhysicsContract p_llm = extract_contract(description, extractor, options.data_dir);
      trace.extracted = p_llm;

      auto judge = [&](int iteration, std::string code) {
        PipelineStep step;
        step.iteration = iteration;
        step.code = std::move(code);
        try {
          PhysicsContract cand = reconstruct_contract(hit::parse_input(step.code), reg);
          EvalReport rep = evaluate(p_llm, cand, reg, options.eval);
          step.internal_ifs = rep.ifs;
          step.report = std::move(rep);
        } catch (const ParseError& e) {
          step.internal_ifs = 0.0;
          step.parse_error = e.what();
        }
        return step;
      };

      trace.steps.push_back(judge(0, generate_code(p_llm, generator, options.data_dir)));

      if (options.preset == Preset::pde_refine) {
        for (int round = 1; round <= options.max_refinements; ++round) {
          if (trace.steps[best].internal_ifs.value_or(0.0) >= options.tau_ifs) break;
          // Always refine from the best-scoring candidate, not the latest one.
          std::string revised;
          {
            const PipelineStep& current = trace.steps[best];
            if (current.report.has_value()) {
              revised = refine_once(current.code, *current.report, refiner,
                                    options.data_dir);
            } else {
              const Json pseudo = {
                  {"score", 0.0},
                  {"parse_error", current.parse_error.value_or("input did not parse")}};
              const std::string prompt = fill_refine_template(
                  load_template(options.data_dir, "refine"), current.code,
                  pseudo.dump(2));
              revised = input_payload(refiner.complete(prompt, Role::refiner));
            }
          }
          PipelineStep step = judge(round, std::move(revised));
          if (step.internal_ifs.value_or(0.0) >
              trace.steps[best].internal_ifs.value_or(0.0)) {
            step.accepted = true;
            trace.accepted.push_back(round);
            best = trace.steps.size();
          }
          trace.steps.push_back(std::move(step));
        }
      }
    }
  } catch (const ExtractionError& e) {
    trace.error = e.what();
  } catch (const EndpointError& e) {
    trace.error = e.what();
  }

  if (!trace.steps.empty()) {
    trace.final_code = trace.steps[best].code;
    trace.final_ifs = trace.steps[best].internal_ifs;
  }
  return trace;
}

Json trace_to_json(const PipelineTrace& trace) {
  Json j;
  j["preset"] = std::string(to_string(trace.preset));
  j["extracted"] =
      trace.extracted ? Json::parse(save_contract(*trace.extracted)) : Json(nullptr);
  j["steps"] = Json::array();
  for (const PipelineStep& step : trace.steps) {
    Json s;
    s["iteration"] = step.iteration;
    s["code"] = step.code;
    s["internal_ifs"] = step.internal_ifs ? Json(*step.internal_ifs) : Json(nullptr);
    s["report"] = step.report ? report_to_json(*step.report) : Json(nullptr);
    s["parse_error"] = step.parse_error ? Json(*step.parse_error) : Json(nullptr);
    s["accepted"] = step.accepted;
    j["steps"].push_back(std::move(s));
  }
  j["accepted"] = trace.accepted;
  j["final_code"] = trace.final_code;
  j["final_ifs"] = trace.final_ifs ? Json(*trace.final_ifs) : Json(nullptr);
  j["endpoint_calls"] = trace.endpoint_calls;
  j["error"] = trace.error ? Json(*trace.error) : Json(nullptr);
  return j;
}

} // namespace pde
