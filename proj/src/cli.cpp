#include "skd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "skd/explorer.hpp"
#include "skd/format.hpp"
#include "skd/moves.hpp"
#include "skd/schematic.hpp"

namespace skd {

using nlohmann::json;

ExchangeSet resolve_gamma(const Complex& complex, const CurveTrace& trace, const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream is(spaced);
  ExchangeSet gamma;
  for (std::string tok; is >> tok;) {
    if (complex.has_edge(tok)) {
      gamma.insert(trace.curve_of(tok));
    } else if (tok == "all" || tok == "open" || tok == "closed") {
      for (const auto& c : trace.curves()) {
        if (tok == "all" || (tok == "open") == (c.kind == CurveKind::Open)) gamma.insert(c.id);
      }
    } else {
      throw StructuralError("unknown curve or edge '" + tok + "' in gamma");
    }
  }
  return gamma;
}

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

json gamma_json(const ExchangeSet& g) { return json(std::vector<std::string>(g.curves().begin(), g.curves().end())); }

json census_json(const Census& c) {
  return {{"triple_points", c.triple_points}, {"branch_points", c.branch_points}, {"arcs", c.arcs},
          {"circles", c.circles},             {"open_curves", c.open_curves},     {"closed_curves", c.closed_curves}};
}

class Runner {
 public:
  Runner(bool as_json, unsigned jobs, std::ostream& out, std::ostream& err)
      : json_(as_json), jobs_(jobs), out_(out), err_(err) {}

  int validate(const std::string& path) {
    auto raw = parse_skd_lenient(read_file(path));
    std::vector<std::string> problems;
    for (const auto& d : raw.diagnostics) problems.push_back(d.to_string(path));
    if (problems.empty()) {
      for (const auto& v : skd::validate(Complex(raw.parts)).violations) {
        problems.push_back(path + ": " + std::string(to_string(v.kind)) + ": " + v.message);
      }
    }
    if (json_) {
      emit({{"command", "validate"}, {"valid", problems.empty()}, {"diagnostics", problems}});
    } else if (problems.empty()) {
      out_ << path << ": valid\n";
    } else {
      for (const auto& p : problems) out_ << p << '\n';
    }
    return problems.empty() ? kExitOk : kExitFalse;
  }

  int trace(const std::string& path) {
    auto doc = load(path);
    auto t = trace_curves(doc.complex);
    json curves = json::array();
    for (const auto& c : t.curves()) {
      curves.push_back({{"id", c.id}, {"kind", to_string(c.kind)}, {"edges", c.edges}});
      if (!json_) {
        out_ << c.id << ' ' << to_string(c.kind) << " (" << c.edges.size() << " edges):";
        for (const auto& e : c.edges) out_ << ' ' << e;
        out_ << '\n';
      }
    }
    if (json_) emit({{"command", "trace"}, {"curves", curves}});
    return kExitOk;
  }

  int census(const std::string& path) {
    auto c = skd::census(load(path).complex);
    if (json_) {
      emit({{"command", "census"}, {"census", census_json(c)}});
    } else {
      out_ << "triple points: " << c.triple_points << "\nbranch points: " << c.branch_points
           << "\narcs: " << c.arcs << "\ncircles: " << c.circles << "\nopen curves: " << c.open_curves
           << "\nclosed curves: " << c.closed_curves << '\n';
    }
    return kExitOk;
  }

  int check_exchangeable(const std::string& path, const std::string& gamma_text) {
    auto doc = load(path);
    auto t = trace_curves(doc.complex);
    auto gamma = resolve_gamma(doc.complex, t, gamma_text);
    auto bad = first_invalid_triple(doc.complex, t, gamma);
    if (json_) {
      json j{{"command", "check-exchangeable"}, {"gamma", gamma_json(gamma)}, {"exchangeable", !bad}};
      if (bad) j["invalid_triple"] = *bad;
      emit(j);
    } else if (bad) {
      out_ << gamma.to_string() << " is not exchangeable: no height order at triple point " << *bad << '\n';
    } else {
      out_ << gamma.to_string() << " is exchangeable\n";
    }
    return bad ? kExitFalse : kExitOk;
  }

  int check_dd(const std::string& path, const std::string& gamma_text) {
    auto doc = load(path);
    auto t = trace_curves(doc.complex);
    auto gamma = resolve_gamma(doc.complex, t, gamma_text);
    std::vector<std::string> split_disks;
    for (const auto& [id, d] : doc.complex.disks()) {
      if (gamma.contains(t.curve_of(d.edge1)) != gamma.contains(t.curve_of(d.edge2))) split_disks.push_back(id);
    }
    bool ok = satisfies_dd_condition(doc.complex, t, gamma);
    if (json_) {
      emit({{"command", "check-dd"}, {"gamma", gamma_json(gamma)}, {"dd_condition", ok}, {"violating_disks", split_disks}});
    } else if (ok) {
      out_ << gamma.to_string() << " satisfies the descendent disk condition\n";
    } else {
      out_ << gamma.to_string() << " fails the descendent disk condition at";
      for (const auto& d : split_disks) out_ << ' ' << d;
      out_ << '\n';
    }
    return ok ? kExitOk : kExitFalse;
  }

  int crossing_change(const std::string& path, const std::string& gamma_text, const std::string& output) {
    auto doc = load(path);
    auto t = trace_curves(doc.complex);
    auto gamma = resolve_gamma(doc.complex, t, gamma_text);
    if (auto bad = first_invalid_triple(doc.complex, t, gamma)) {
      report_false("crossing-change", gamma.to_string() + " is not exchangeable at triple point " + *bad);
      return kExitFalse;
    }
    SkdDocument result{skd::crossing_change(doc.complex, gamma), doc.oracle};
    write_file(output, serialize_document(result));
    auto fp = fingerprint(result.complex);
    if (json_) {
      emit({{"command", "crossing-change"}, {"gamma", gamma_json(gamma)}, {"output", output}, {"fingerprint", fp}});
    } else {
      out_ << "wrote D" << gamma.to_string() << " to " << output << " (fingerprint " << fp << ")\n";
    }
    return kExitOk;
  }

  int apply(const std::string& path, const std::string& script, const std::string& gamma_text,
            const std::string& output, const std::string& trail_path) {
    auto doc = load(path);
    auto moves = parse_skm(read_file(script), script);
    auto gamma = resolve_gamma(doc.complex, trace_curves(doc.complex), gamma_text);
    auto res = apply_sequence(doc.complex, gamma, moves);
    write_file(output, serialize_document({res.complex, doc.oracle}));

    json trail = json::array();
    std::ostringstream text;
    for (std::size_t i = 0; i < res.trail.size(); ++i) {
      const auto& e = res.trail[i];
      trail.push_back({{"step", e.step},
                       {"move", format_move(moves[i])},
                       {"fingerprint", e.fingerprint},
                       {"gamma", gamma_json(e.gamma)},
                       {"exchangeable", e.exchangeable},
                       {"dd_condition", e.dd_condition},
                       {"triple_points", e.triple_points}});
      text << "step " << e.step << ' ' << format_move(moves[i]) << "\n  gamma " << e.gamma.to_string()
           << " exchangeable=" << (e.exchangeable ? "yes" : "no") << " dd=" << (e.dd_condition ? "yes" : "no")
           << " triple_points=" << e.triple_points << " fingerprint=" << e.fingerprint << '\n';
    }
    if (!trail_path.empty()) {
      write_file(trail_path, json_ ? json{{"format_version", kJsonFormatVersion}, {"trail", trail}}.dump(2) + "\n"
                                   : text.str());
    }
    if (json_) {
      emit({{"command", "apply"},
            {"steps", res.trail.size()},
            {"gamma", gamma_json(res.gamma)},
            {"output", output},
            {"trail", trail}});
    } else {
      out_ << text.str() << "applied " << res.trail.size() << " moves; final gamma " << res.gamma.to_string()
           << ", wrote " << output << '\n';
    }
    return kExitOk;
  }

  int enumerate(const std::string& path, std::optional<std::size_t> max_size, const std::string& oracle_path) {
    auto doc = load(path);
    auto oracle = doc.oracle;
    if (!oracle_path.empty()) oracle.merge(parse_oracle(read_file(oracle_path), oracle_path));
    EnumerationOptions opts{max_size, kDefaultEnumerationCap, jobs_};
    auto t = trace_curves(doc.complex);
    auto sets = enumerate_exchangeable(doc.complex, opts);
    json rows = json::array();
    for (const auto& g : sets) {
      json row{{"gamma", gamma_json(g)}, {"size", g.size()}, {"dd_condition", satisfies_dd_condition(doc.complex, t, g)}};
      if (!oracle_path.empty() || !oracle.empty()) {
        row["verdict"] = to_string(oracle.lookup(fingerprint(skd::crossing_change(doc.complex, g))));
      }
      if (!json_) {
        out_ << g.to_string() << " dd=" << (row["dd_condition"].get<bool>() ? "yes" : "no");
        if (row.contains("verdict")) out_ << " verdict=" << row["verdict"].get<std::string>();
        out_ << '\n';
      }
      rows.push_back(std::move(row));
    }
    if (json_) {
      emit({{"command", "enumerate"}, {"curves", t.curves().size()}, {"exchangeable", rows}});
    } else {
      out_ << sets.size() << " exchangeable unions of " << t.curves().size() << " curves\n";
    }
    return kExitOk;
  }

  int du_bound(const std::string& path, const std::string& oracle_path, std::optional<std::size_t> max_size) {
    auto doc = load(path);
    auto oracle = doc.oracle;
    oracle.merge(parse_oracle(read_file(oracle_path), oracle_path));
    auto report = du_index_upper_bound(doc.complex, oracle, {max_size, kDefaultEnumerationCap, jobs_});
    json rows = json::array();
    for (const auto& w : report.witnesses) {
      rows.push_back({{"gamma", gamma_json(w.gamma)},
                      {"size", w.size},
                      {"exchangeable", w.exchangeable},
                      {"dd_condition", w.dd},
                      {"verdict", to_string(w.verdict)},
                      {"fingerprint", w.fingerprint}});
    }
    if (json_) {
      json j{{"command", "du-bound"}, {"witnesses", rows}, {"scope", DuReport::kScope}};
      j["best_size"] = report.best_size ? json(*report.best_size) : json(nullptr);
      j["best_gamma"] = report.best ? gamma_json(*report.best) : json(nullptr);
      emit(j);
    } else {
      for (const auto& w : report.witnesses) {
        out_ << w.gamma.to_string() << " size=" << w.size << " dd=" << (w.dd ? "yes" : "no")
             << " verdict=" << to_string(w.verdict) << '\n';
      }
      if (report.best_size) {
        out_ << "best size: " << *report.best_size << " via " << report.best->to_string() << '\n';
      } else {
        out_ << "best size: none (no exchangeable, dd-satisfying union is annotated trivial)\n";
      }
      out_ << "note: " << DuReport::kScope << '\n';
    }
    return kExitOk;
  }

  int schematic(const std::string& path, const std::string& output) {
    auto doc = load(path);
    write_file(output, export_schematic(doc.complex));
    if (json_) emit({{"command", "schematic"}, {"output", output}});
    else out_ << "wrote " << output << '\n';
    return kExitOk;
  }

  int fingerprint_of(const std::string& path) {
    auto fp = fingerprint(load(path).complex);
    if (json_) emit({{"command", "fingerprint"}, {"fingerprint", fp}});
    else out_ << fp << '\n';
    return kExitOk;
  }

  int error(const std::string& command, const std::string& message, const std::vector<std::string>& lines = {}) {
    if (lines.empty()) err_ << "error: " << message << '\n';
    for (const auto& l : lines) err_ << l << '\n';
    if (json_) emit({{"command", command}, {"error", message}, {"diagnostics", lines}});
    return kExitInputError;
  }

 private:
  SkdDocument load(const std::string& path) { return parse_skd(read_file(path), path); }

  void emit(json j) {
    j["format_version"] = kJsonFormatVersion;
    out_ << j.dump(2) << '\n';
  }

  void report_false(const std::string& command, const std::string& message) {
    if (json_) emit({{"command", command}, {"result", false}, {"reason", message}});
    else out_ << message << '\n';
  }

  bool json_;
  unsigned jobs_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singularity complexes of surface-knot diagrams: curves, crossing changes, moves"};
  app.require_subcommand(1);
  bool as_json = false;
  unsigned jobs = 1;
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("--jobs", jobs, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));

  std::string skd, skm, gamma, output, trail, oracle;
  std::optional<std::size_t> max_size;

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("skd", skd, "Diagram file (.skd)")->required();
    return s;
  };
  auto* validate_cmd = sub("validate", "Check incidence and counting rules");
  auto* trace_cmd = sub("trace", "List double curves");
  auto* census_cmd = sub("census", "Count points, edges and curves");
  auto* exch_cmd = sub("check-exchangeable", "Exit 0 iff the union is exchangeable");
  exch_cmd->add_option("--gamma", gamma, "Edge ids or all/open/closed")->required();
  auto* dd_cmd = sub("check-dd", "Exit 0 iff the union satisfies the descendent disk condition");
  dd_cmd->add_option("--gamma", gamma, "Edge ids or all/open/closed")->required();
  auto* cc_cmd = sub("crossing-change", "Write D(gamma)");
  cc_cmd->add_option("--gamma", gamma, "Edge ids or all/open/closed")->required();
  cc_cmd->add_option("-o,--output", output, "Output .skd")->required();
  auto* apply_cmd = sub("apply", "Run a t-descendent move script and transport gamma");
  apply_cmd->add_option("skm", skm, "Move script (.skm)")->required();
  apply_cmd->add_option("--gamma", gamma, "Edge ids or all/open/closed");
  apply_cmd->add_option("-o,--output", output, "Output .skd")->required();
  apply_cmd->add_option("--trail", trail, "Per-step report");
  auto* enum_cmd = sub("enumerate", "List exchangeable unions");
  enum_cmd->add_option("--max-size", max_size, "Largest union size to consider");
  enum_cmd->add_option("--oracle", oracle, "Oracle annotations file");
  auto* du_cmd = sub("du-bound", "Upper bound on the du-exchange index from this diagram");
  du_cmd->add_option("--oracle", oracle, "Oracle annotations file")->required();
  du_cmd->add_option("--max-size", max_size, "Largest union size to consider");
  auto* schem_cmd = sub("schematic", "Write a Graphviz DOT picture of the double curves");
  schem_cmd->add_option("-o,--output", output, "Output .dot")->required();
  auto* fp_cmd = sub("fingerprint", "SHA-256 of the canonical serialization");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  Runner run(as_json, jobs, out, err);
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (validate_cmd->parsed()) return run.validate(skd);
    if (trace_cmd->parsed()) return run.trace(skd);
    if (census_cmd->parsed()) return run.census(skd);
    if (exch_cmd->parsed()) return run.check_exchangeable(skd, gamma);
    if (dd_cmd->parsed()) return run.check_dd(skd, gamma);
    if (cc_cmd->parsed()) return run.crossing_change(skd, gamma, output);
    if (apply_cmd->parsed()) return run.apply(skd, skm, gamma, output, trail);
    if (enum_cmd->parsed()) return run.enumerate(skd, max_size, oracle);
    if (du_cmd->parsed()) return run.du_bound(skd, oracle, max_size);
    if (schem_cmd->parsed()) return run.schematic(skd, output);
    if (fp_cmd->parsed()) return run.fingerprint_of(skd);
  } catch (const ParseError& e) {
    std::vector<std::string> lines;
    std::istringstream is(e.what());
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    return run.error(command, "input rejected", lines);
  } catch (const SequenceError& e) {
    return run.error(command, "step " + std::to_string(e.step()) + ": " + e.what());
  } catch (const std::exception& e) {
    return run.error(command, e.what());
  }
  return kExitInputError;
}

}  // namespace skd
