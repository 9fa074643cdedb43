#include "er2rel/cli.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "er2rel/analysis.hpp"
#include "er2rel/model.hpp"
#include "er2rel/oracle.hpp"
#include "er2rel/text.hpp"
#include "er2rel/transform.hpp"

namespace er2rel {

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDisagreement = 2;
constexpr int kExitCapExceeded = 3;

struct CommonOptions {
  std::string input = "-";
  std::string format = "paper";
};

RdsFormat rds_format(const CommonOptions& opts) {
  return opts.format == "structured" ? RdsFormat::Structured : RdsFormat::Paper;
}

bool read_source(const CommonOptions& opts, std::istream& in, std::ostream& err,
                 std::string& source) {
  if (opts.input == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    source = buffer.str();
    return true;
  }
  std::ifstream file(opts.input);
  if (!file) {
    err << "er2rel: cannot open '" << opts.input << "'\n";
    return false;
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  source = buffer.str();
  return true;
}

std::string input_label(const CommonOptions& opts) {
  return opts.input == "-" ? "<stdin>" : opts.input;
}

/// Parses the model or reports diagnostics and leaves the optional empty.
std::optional<ErModel> load_model(const CommonOptions& opts, std::istream& in,
                                  std::ostream& err) {
  std::string source;
  if (!read_source(opts, in, err, source)) return std::nullopt;
  ParseResult parsed = parse_er(source);
  if (!parsed.model) {
    for (const auto& d : parsed.diagnostics) {
      err << input_label(opts) << ":" << to_string(d) << "\n";
    }
    return std::nullopt;
  }
  return parsed.model;
}

ordered_json cardinality_json(const Cardinality& c) {
  if (c.is_unbounded()) return "N";
  return c.value();
}

ordered_json classification_json(const Classification& c) {
  ordered_json j;
  j["kind"] = std::string(classification_key(c.kind));
  if (c.kind == RelationshipClass::OneToMany) {
    j["one_side"] = std::string(side_name(c.one_side));
  }
  return j;
}

ordered_json schema_json(const RelationalSchema& schema) {
  // render_rds already produces the structured document; reuse it.
  return ordered_json::parse(render_rds(schema, RdsFormat::Structured));
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

int run_transform(const CommonOptions& opts, std::istream& in, std::ostream& out,
                  std::ostream& err) {
  auto model = load_model(opts, in, err);
  if (!model) return kExitUsage;
  RelationalSchema schema;
  try {
    schema = transform(*model);
  } catch (const TransformError& e) {
    err << "er2rel: " << e.what() << "\n";
    return kExitUsage;
  }
  out << render_rds(schema, rds_format(opts));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

std::string bound_text(const SlotVerdict& v) {
  switch (v.kind) {
    case VerdictKind::Exact: return "exact, value " + v.bound->to_string();
    case VerdictKind::LowerBoundOnly: return "lower bound only, exceeds " + v.bound->to_string();
    case VerdictKind::NotRepresented: return "not represented";
  }
  return "not represented";
}

std::string encoding_text(const ErModel& model, const RelationshipReport& rr) {
  if (rr.encoding.kind == EncodingKind::JunctionRelation) {
    return "encoded by junction relation " + rr.encoding.relation;
  }
  const RelationshipType& rel = *model.find_relationship(rr.relationship);
  const std::string& target =
      rr.placement->holder == Side::Left ? rel.right_entity : rel.left_entity;
  return "encoded by foreign key " + fk_column_name(*model.find_entity(target)) + " in " +
         rr.encoding.relation + " (" + std::string(placement_reason_text(rr.placement->reason)) +
         ")";
}

void print_report_paper(const ErModel& model, const PreservationReport& report,
                        std::ostream& out) {
  out << "schema:\n" << render_rds(report.schema, RdsFormat::Paper);
  for (const auto& rr : report.relationships) {
    out << "\n" << rr.relationship << ": " << classification_text(rr.classification) << ", "
        << encoding_text(model, rr) << "\n";
    for (const auto& v : rr.verdicts) {
      out << "  " << slot_name(v.slot) << " = " << v.declared.to_string() << ": "
          << bound_text(v) << " (" << justification_key(v.justification) << ") - "
          << v.explanation << "\n";
    }
  }
  const ModelSummary s = summarize(report);
  out << "\nsummary: " << s.relationship_count
      << (s.relationship_count == 1 ? " relationship, " : " relationships, ") << s.exact
      << " exact, " << s.lower_bound_only << " lower bound only, " << s.not_represented
      << " not represented\n";
}

ordered_json slot_verdict_json(const SlotVerdict& v) {
  ordered_json j;
  j["slot"] = std::string(slot_key(v.slot));
  j["declared"] = cardinality_json(v.declared);
  j["kind"] = std::string(verdict_kind_key(v.kind));
  j["bound"] = v.bound ? cardinality_json(*v.bound) : ordered_json(nullptr);
  j["justification"] = std::string(justification_key(v.justification));
  j["explanation"] = v.explanation;
  return j;
}

void print_report_structured(const PreservationReport& report, std::ostream& out) {
  ordered_json doc;
  doc["schema"] = schema_json(report.schema);
  doc["relationships"] = ordered_json::array();
  for (const auto& rr : report.relationships) {
    ordered_json r;
    r["name"] = rr.relationship;
    r["classification"] = classification_json(rr.classification);
    r["encoding"] = {{"kind", std::string(encoding_kind_key(rr.encoding.kind))},
                     {"relation", rr.encoding.relation}};
    if (rr.placement) {
      r["placement"] = {{"holder", std::string(side_name(rr.placement->holder))},
                        {"reason", std::string(placement_reason_text(rr.placement->reason))}};
    } else {
      r["placement"] = nullptr;
    }
    r["slots"] = ordered_json::array();
    for (const auto& v : rr.verdicts) r["slots"].push_back(slot_verdict_json(v));
    doc["relationships"].push_back(std::move(r));
  }
  const ModelSummary s = summarize(report);
  doc["summary"] = {{"relationships", s.relationship_count},
                    {"exact", s.exact},
                    {"lower_bound_only", s.lower_bound_only},
                    {"not_represented", s.not_represented}};
  out << doc.dump(2) << "\n";
}

int run_analyze(const CommonOptions& opts, std::istream& in, std::ostream& out,
                std::ostream& err) {
  auto model = load_model(opts, in, err);
  if (!model) return kExitUsage;
  PreservationReport report;
  try {
    report = analyze(*model);
  } catch (const TransformError& e) {
    err << "er2rel: " << e.what() << "\n";
    return kExitUsage;
  }
  if (rds_format(opts) == RdsFormat::Paper) {
    print_report_paper(*model, report, out);
  } else {
    print_report_structured(report, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

bool parse_max_samples(const std::string& text, std::vector<Cardinality>& out,
                       std::ostream& err) {
  out.clear();
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item == "N") {
      out.push_back(Cardinality::unbounded());
      continue;
    }
    try {
      size_t used = 0;
      const int value = std::stoi(item, &used);
      if (used != item.size() || value < 1) throw std::invalid_argument(item);
      out.push_back(Cardinality::finite(value));
    } catch (const std::exception&) {
      err << "er2rel: invalid max sample '" << item << "' (expected a positive integer or N)\n";
      return false;
    }
  }
  const bool any_many = std::any_of(out.begin(), out.end(),
                                    [](const Cardinality& c) { return c.exceeds_one(); });
  if (!any_many) {
    err << "er2rel: --max-samples needs at least one bound above 1\n";
    return false;
  }
  return true;
}

std::string oracle_verdict_text(const OracleVerdict& v) {
  switch (v.kind) {
    case VerdictKind::Exact: return "exact, value " + v.bound->to_string();
    case VerdictKind::LowerBoundOnly: return "lower bound only, exceeds " + v.bound->to_string();
    case VerdictKind::NotRepresented: return "not represented";
  }
  return "not represented";
}

void print_verify_paper(const VerifyResult& result, const VerifyOptions& options,
                        std::ostream& out) {
  for (const auto& rv : result.relationships) {
    out << rv.relationship << ": " << classification_text(rv.classification) << "\n";
    if (options.run_inverse_image) {
      out << "  family: " << rv.family_size << " members, " << rv.class_sizes.size()
          << " schema classes (sizes";
      for (int size : rv.class_sizes) out << " " << size;
      out << ")";
      if (rv.input_class >= 0) {
        out << "; input falls in class " << rv.input_class + 1 << " ("
            << rv.class_sizes[rv.input_class] << " members)";
      }
      out << "\n";
      if (!rv.family_coherent) out << "  family check failed: " << rv.incoherence_note << "\n";
    }
    if (options.run_instances) {
      out << "  instances: " << rv.total_instances << " enumerated, "
          << rv.populated_instances << " populated (pool size " << options.pool_size << ")\n";
    }
    for (const auto& slot : rv.slots) {
      out << "  " << slot_name(slot.analyzer.slot) << " = "
          << slot.analyzer.declared.to_string() << ": rule says " << bound_text(slot.analyzer);
      if (slot.inverse_image) {
        out << "; inverse image says " << oracle_verdict_text(*slot.inverse_image) << " ["
            << (slot.inverse_image_ok ? "agree" : "DISAGREE") << "]";
      }
      if (slot.instances) {
        out << "; instances say " << oracle_verdict_text(*slot.instances) << " ["
            << (slot.instances_ok ? "agree" : "DISAGREE") << "]";
      }
      out << "\n";
      if (slot.inverse_image && !slot.inverse_image_ok) {
        out << "    inverse image witness: " << slot.inverse_image->witness << "\n";
      }
      if (slot.instances && !slot.instances_ok) {
        out << "    instance witness: " << slot.instances->witness << "\n";
      }
    }
    out << "  agreement: " << (rv.agrees() ? "yes" : "NO") << "\n";
  }
  out << "overall: " << (result.agrees() ? "AGREE" : "DISAGREE") << "\n";
}

ordered_json oracle_verdict_json(const OracleVerdict& v) {
  ordered_json j;
  j["kind"] = std::string(verdict_kind_key(v.kind));
  j["bound"] = v.bound ? cardinality_json(*v.bound) : ordered_json(nullptr);
  j["witness"] = v.witness;
  return j;
}

void print_verify_structured(const VerifyResult& result, const VerifyOptions& options,
                             std::ostream& out) {
  ordered_json doc;
  doc["relationships"] = ordered_json::array();
  for (const auto& rv : result.relationships) {
    ordered_json r;
    r["name"] = rv.relationship;
    r["classification"] = classification_json(rv.classification);
    if (options.run_inverse_image) {
      r["family_size"] = rv.family_size;
      r["class_sizes"] = rv.class_sizes;
      r["input_class"] = rv.input_class;
      r["family_coherent"] = rv.family_coherent;
      if (!rv.family_coherent) r["incoherence_note"] = rv.incoherence_note;
    }
    if (options.run_instances) {
      r["total_instances"] = rv.total_instances;
      r["populated_instances"] = rv.populated_instances;
      r["pool_size"] = options.pool_size;
    }
    r["slots"] = ordered_json::array();
    for (const auto& slot : rv.slots) {
      ordered_json s;
      s["slot"] = std::string(slot_key(slot.analyzer.slot));
      s["declared"] = cardinality_json(slot.analyzer.declared);
      s["analyzer"] = {{"kind", std::string(verdict_kind_key(slot.analyzer.kind))},
                       {"bound", slot.analyzer.bound ? cardinality_json(*slot.analyzer.bound)
                                                     : ordered_json(nullptr)},
                       {"justification", std::string(justification_key(slot.analyzer.justification))}};
      s["inverse_image"] =
          slot.inverse_image ? oracle_verdict_json(*slot.inverse_image) : ordered_json(nullptr);
      s["instances"] = slot.instances ? oracle_verdict_json(*slot.instances) : ordered_json(nullptr);
      s["inverse_image_agrees"] = slot.inverse_image_ok;
      s["instances_agree"] = slot.instances_ok;
      r["slots"].push_back(std::move(s));
    }
    r["agrees"] = rv.agrees();
    doc["relationships"].push_back(std::move(r));
  }
  doc["agrees"] = result.agrees();
  out << doc.dump(2) << "\n";
}

int run_verify(const CommonOptions& opts, const VerifyOptions& options, std::istream& in,
               std::ostream& out, std::ostream& err) {
  auto model = load_model(opts, in, err);
  if (!model) return kExitUsage;
  VerifyResult result;
  try {
    result = verify_model(*model, options);
  } catch (const CapExceededError& e) {
    err << "er2rel: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const TransformError& e) {
    err << "er2rel: " << e.what() << "\n";
    return kExitUsage;
  }
  if (rds_format(opts) == RdsFormat::Paper) {
    print_verify_paper(result, options, out);
  } else {
    print_verify_structured(result, options, out);
  }
  return result.agrees() ? kExitOk : kExitDisagreement;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"ER-to-relational schema compiler and constraint preservation auditor"};
  app.require_subcommand(1);

  CommonOptions transform_opts, analyze_opts, verify_opts;
  std::string oracle = "both";
  std::string max_samples_text = "2,3,N";
  int pool_size = 2;

  const auto add_common = [](CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("input", opts.input, "Input file, or - for stdin");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"paper", "structured"}))
        ->capture_default_str();
  };

  CLI::App* cmd_transform =
      app.add_subcommand("transform", "Map an ER model to a relational schema");
  add_common(cmd_transform, transform_opts);

  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "Report which structural constraints survive");
  add_common(cmd_analyze, analyze_opts);

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "Check the analyzer against brute-force oracles");
  add_common(cmd_verify, verify_opts);
  cmd_verify->add_option("--oracle", oracle, "Which oracle(s) to run")
      ->check(CLI::IsMember({"inverse-image", "instances", "both"}))
      ->capture_default_str();
  cmd_verify->add_option("--pool-size", pool_size, "Key pool size for instance enumeration")
      ->check(CLI::Range(1, kMaxPoolSize))
      ->capture_default_str();
  cmd_verify->add_option("--max-samples", max_samples_text,
                         "Comma-separated bounds above 1 for the model family (N = unbounded)")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("er2rel");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    for (CLI::App* sub : {cmd_transform, cmd_analyze, cmd_verify}) {
      if (sub->parsed()) {
        out << sub->help();
        return kExitOk;
      }
    }
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "er2rel: " << e.what() << "\n";
    return kExitUsage;
  }

  if (cmd_transform->parsed()) return run_transform(transform_opts, in, out, err);
  if (cmd_analyze->parsed()) return run_analyze(analyze_opts, in, out, err);

  VerifyOptions options;
  options.run_inverse_image = oracle != "instances";
  options.run_instances = oracle != "inverse-image";
  options.pool_size = pool_size;
  if (!parse_max_samples(max_samples_text, options.max_samples, err)) return kExitUsage;
  return run_verify(verify_opts, options, in, out, err);
}

}  // namespace er2rel
