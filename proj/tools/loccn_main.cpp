// Copyright 2026 The loccn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "loccn/analysis.hpp"
#include "loccn/classes.hpp"
#include "loccn/io.hpp"
#include "loccn/protocol.hpp"
#include "loccn/state.hpp"
#include "loccn/volumes.hpp"

namespace {

using loccn::Json;

struct GlobalOpts {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int budget = 64;
  int threads = 1;
  bool text = false;
};

std::string scalar_to_text(const Json& v, bool fixed6) {
  if (v.is_number_float()) {
    std::ostringstream os;
    if (fixed6) {
      os << std::fixed << std::setprecision(6) << v.get<double>();
    } else {
      os << std::setprecision(9) << v.get<double>();
    }
    return os.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_text(const Json& j, const std::string& indent, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& item : j.items()) {
      const Json& v = item.value();
      if (v.is_object() || v.is_array()) {
        bool flat = v.is_array();
        if (flat) {
          for (const Json& e : v) {
            if (e.is_object() || e.is_array()) {
              flat = false;
              break;
            }
          }
        }
        if (flat) {
          const bool fixed6 = item.key() == "bloch";
          os << indent << item.key() << ": [";
          bool first = true;
          for (const Json& e : v) {
            os << (first ? "" : ", ") << scalar_to_text(e, fixed6);
            first = false;
          }
          os << "]\n";
        } else {
          os << indent << item.key() << ":\n";
          render_text(v, indent + "  ", os);
        }
      } else {
        os << indent << item.key() << ": " << scalar_to_text(v, false) << "\n";
      }
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const Json& e : j) {
      os << indent << "- [" << i++ << "]\n";
      render_text(e, indent + "  ", os);
    }
  } else {
    os << indent << scalar_to_text(j, false) << "\n";
  }
}

void emit(const Json& report, const GlobalOpts& g) {
  if (g.text) {
    render_text(report, "", std::cout);
  } else {
    std::cout << loccn::dump_json(report);
  }
}

std::vector<double> parse_reals(const std::string& text, std::size_t expected,
                                const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": cannot parse '" + item + "' as a real number");
    }
  }
  if (out.size() != expected) {
    throw std::invalid_argument(flag + ": expected " + std::to_string(expected) +
                                " comma-separated reals");
  }
  return out;
}

loccn::BlochVec parse_bloch_arg(const std::string& text, const std::string& flag) {
  const std::vector<double> v = parse_reals(text, 3, flag);
  return {v[0], v[1], v[2]};
}

Json bloch_to_json(const loccn::BlochVec& v) { return Json::array({v.x, v.y, v.z}); }

Json header(const char* command, const GlobalOpts& g) {
  Json rep;
  rep["command"] = command;
  rep["tolerance"] = g.tol;
  return rep;
}

Json reach_to_json(const loccn::ReachResult& r) {
  Json j;
  j["value"] = r.reachable;
  if (r.reachable) {
    j["symmetry"] = r.symmetry;
    j["party"] = r.party;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  CLI::App app{"finite-round local manipulation of pure states with finite stabilizer"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--tol", g.tol, "numeric tolerance")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "search budget for inconclusive-prone calls")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for sampling")->capture_default_str();
  auto* json_flag = app.add_flag("--json", "machine-readable report (default)");
  auto* text_flag = app.add_flag("--text", g.text, "human-readable report");
  text_flag->excludes(json_flag);

  std::string state_path, target_path, witness_path, step_path, proto_path;
  std::string anchor_path, slice_path, out_path, class_name, kind_name;
  std::string g1_arg, g2_arg, h2_arg, alpha_arg;
  int party = 0;
  int level_m = 2;
  std::uint64_t samples = 2000;

  auto* analyze = app.add_subcommand("analyze", "full taxonomy of one state");
  analyze->fallthrough();
  analyze->add_option("state", state_path, "state JSON file")->required();
  analyze->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::Classification cls =
        loccn::classify(ps.state, ps.spec.stabilizer, g.tol, g.budget, g.seed);
    Json rep = header("analyze", g);
    rep["seed"] = g.seed;
    rep["budget"] = g.budget;
    rep["class"] = ps.spec.name;
    rep["reachable"] = reach_to_json(cls.reach);
    Json conv = Json::array();
    for (const loccn::ConvertResult& r : cls.convertible)
      conv.push_back(loccn::witness_opt_to_json(r));
    rep["convertible"] = std::move(conv);
    rep["mes_member"] = cls.mes_member;
    rep["mes_convertible"] = cls.mes_convertible;
    rep["isolated"] = loccn::to_string(cls.isolated);
    emit(rep, g);
  });

  auto* reach = app.add_subcommand("reachable", "finite-round reachability of one state");
  reach->fallthrough();
  reach->add_option("state", state_path, "state JSON file")->required();
  reach->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::ReachResult r = loccn::check_reachable(ps.state, ps.spec.stabilizer, g.tol);
    Json rep = header("reachable", g);
    rep["class"] = ps.spec.name;
    rep["reachable"] = reach_to_json(r);
    emit(rep, g);
  });

  auto* conv = app.add_subcommand("convertible", "one-round convertibility at one party");
  conv->fallthrough();
  conv->add_option("state", state_path, "state JSON file")->required();
  conv->add_option("--party", party, "acting party (0-based)")->required();
  conv->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::ConvertResult r =
        loccn::check_convertible(ps.state, ps.spec.stabilizer, party, g.tol, g.budget, g.seed);
    Json rep = header("convertible", g);
    rep["seed"] = g.seed;
    rep["budget"] = g.budget;
    rep["class"] = ps.spec.name;
    rep["party"] = party;
    rep["result"] = loccn::witness_opt_to_json(r);
    emit(rep, g);
  });

  auto* sep = app.add_subcommand("sep-check", "separable-map feasibility source -> target");
  sep->fallthrough();
  sep->add_option("source", state_path, "source state JSON file")->required();
  sep->add_option("target", target_path, "target state JSON file")->required();
  sep->callback([&] {
    const loccn::ParsedState src = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::ParsedState tgt = loccn::parse_state(loccn::json_from_file(target_path));
    const loccn::SimplexFeasibility f =
        loccn::sep_check(src.state, tgt.state, src.spec.stabilizer, g.tol);
    Json rep = header("sep-check", g);
    rep["class"] = src.spec.name;
    rep["result"] = loccn::feasibility_to_json(f);
    emit(rep, g);
  });

  auto* mes = app.add_subcommand("mes-check", "maximally entangled set membership");
  mes->fallthrough();
  mes->add_option("state", state_path, "state JSON file")->required();
  mes->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::ReachResult r = loccn::check_reachable(ps.state, ps.spec.stabilizer, g.tol);
    const bool mc = loccn::check_mes_convertible(ps.state, ps.spec.stabilizer, g.tol);
    Json rep = header("mes-check", g);
    rep["class"] = ps.spec.name;
    rep["mes_member"] = !r.reachable;
    rep["mes_convertible"] = mc;
    emit(rep, g);
  });

  auto* lock = app.add_subcommand("lock-report", "per-party convertibility before/after a step");
  lock->fallthrough();
  lock->add_option("state", state_path, "state JSON file")->required();
  lock->add_option("--step", step_path, "witness JSON file for the step");
  lock->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    loccn::Witness w;
    const loccn::Witness* wp = nullptr;
    if (!step_path.empty()) {
      w = loccn::json_to_witness(loccn::json_from_file(step_path));
      wp = &w;
    }
    const loccn::LockReport lr =
        loccn::lock_report(ps.state, ps.spec.stabilizer, wp, g.tol, g.budget, g.seed);
    Json rep = header("lock-report", g);
    rep["seed"] = g.seed;
    rep["budget"] = g.budget;
    rep["class"] = ps.spec.name;
    Json before = Json::array();
    for (loccn::Status s : lr.before) before.push_back(loccn::to_string(s));
    rep["before"] = std::move(before);
    if (wp != nullptr) {
      Json after = Json::array();
      for (loccn::Status s : lr.after) after.push_back(loccn::to_string(s));
      rep["after"] = std::move(after);
      rep["locked"] = lr.locked;
      rep["unlocked"] = lr.unlocked;
    }
    rep["prop_commute"] = lr.prop_commute;
    emit(rep, g);
  });

  auto* synth = app.add_subcommand("synth", "protocol synthesizers");
  synth->fallthrough();
  synth->require_subcommand(1);

  auto* locc1 = synth->add_subcommand("locc1", "one-round tree from a witness");
  locc1->fallthrough();
  locc1->add_option("state", state_path, "source state JSON file")->required();
  locc1->add_option("witness", witness_path, "witness JSON file")->required();
  locc1->add_option("--out", out_path, "output protocol file")->default_val("protocol.json");
  locc1->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::Witness w = loccn::json_to_witness(loccn::json_from_file(witness_path));
    const loccn::ProtocolTree tree = loccn::synth_locc1(ps.state, ps.spec.stabilizer, w, g.tol);
    const loccn::RunReport rr = loccn::run_tree(ps.state, tree, ps.spec, g.tol);
    loccn::json_to_file(loccn::tree_to_json(tree), out_path);
    Json rep = header("synth locc1", g);
    rep["class"] = ps.spec.name;
    rep["out"] = out_path;
    rep["verification"] = loccn::run_report_to_json(rr);
    emit(rep, g);
  });

  auto* twostep = synth->add_subcommand("two-step-l", "two-round tree in the L class");
  twostep->fallthrough();
  twostep->add_option("--g1", g1_arg, "party-1 source Bloch vector x,y,z")->required();
  twostep->add_option("--g2", g2_arg, "party-2 source Bloch vector x,y,z")->required();
  twostep->add_option("--h2", h2_arg, "party-2 target Bloch vector x,y,z")->required();
  twostep->add_option("--out", out_path, "output protocol file")->default_val("protocol.json");
  twostep->callback([&] {
    const loccn::TwoStepSynthesis res =
        loccn::synth_two_step_L(parse_bloch_arg(g1_arg, "--g1"), parse_bloch_arg(g2_arg, "--g2"),
                                parse_bloch_arg(h2_arg, "--h2"), g.tol);
    loccn::json_to_file(loccn::tree_to_json(res.tree), out_path);
    Json rep = header("synth two-step-l", g);
    rep["p"] = res.p;
    rep["q"] = res.q;
    rep["q_tilde"] = res.q_tilde;
    rep["h1"] = bloch_to_json(res.h1);
    rep["out"] = out_path;
    rep["verification"] = loccn::run_report_to_json(res.verification);
    emit(rep, g);
  });

  auto* proto = app.add_subcommand("protocol", "protocol tree operations");
  proto->fallthrough();
  proto->require_subcommand(1);

  auto* prun = proto->add_subcommand("run", "simulate a tree on a state");
  prun->fallthrough();
  prun->add_option("protocol", proto_path, "protocol JSON file")->required();
  prun->add_option("state", state_path, "state JSON file")->required();
  prun->callback([&] {
    const loccn::ParsedState ps = loccn::parse_state(loccn::json_from_file(state_path));
    const loccn::ProtocolTree tree = loccn::json_to_tree(loccn::json_from_file(proto_path));
    const loccn::RunReport rr = loccn::run_tree(ps.state, tree, ps.spec, g.tol);
    Json rep = header("protocol run", g);
    rep["class"] = ps.spec.name;
    const Json body = loccn::run_report_to_json(rr);
    for (const auto& item : body.items()) rep[item.key()] = item.value();
    emit(rep, g);
  });

  auto* build = app.add_subcommand("build", "state family builders");
  build->fallthrough();
  build->require_subcommand(1);

  auto* psim = build->add_subcommand("psi-m", "recursive symmetrized family on 2^m qubits");
  psim->fallthrough();
  psim->add_option("--m", level_m, "level (2, 3 or 4)")->required();
  psim->add_option("--alpha", alpha_arg, "8 comma-separated reals: re,im pairs of alpha")
      ->required();
  psim->add_option("--out", out_path, "output state file")->default_val("state.json");
  psim->callback([&] {
    const std::vector<double> raw = parse_reals(alpha_arg, 8, "--alpha");
    std::array<loccn::Complex, 4> coef;
    double norm2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      coef[static_cast<std::size_t>(i)] = {raw[2 * i], raw[2 * i + 1]};
      norm2 += raw[2 * i] * raw[2 * i] + raw[2 * i + 1] * raw[2 * i + 1];
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
      std::cerr << "warning: alpha renormalized (input norm " << std::setprecision(17)
                << std::sqrt(norm2) << ")\n";
    const loccn::AlphaVec alpha = loccn::AlphaVec::normalized(coef);
    const loccn::StateVector rep_vec = loccn::build_psi_m(alpha, level_m);
    loccn::ClassSpec spec =
        loccn::pauli_class(static_cast<int>(rep_vec.dims.size()), rep_vec, g.tol);
    spec.name = "psi" + std::to_string(level_m);
    std::vector<loccn::CMatrix> mixed(spec.dims.size(),
                                      loccn::CMatrix::identity(2) * loccn::Complex(0.5, 0.0));
    const loccn::StateInClass state = loccn::StateInClass::make(spec.name, std::move(mixed));
    loccn::json_to_file(loccn::state_to_json(state, &spec), out_path);
    Json rep = header("build psi-m", g);
    rep["m"] = level_m;
    Json alpha_json = Json::array();
    for (const loccn::Complex& c : alpha.a) alpha_json.push_back(loccn::complex_to_json(c));
    rep["alpha"] = std::move(alpha_json);
    rep["parties"] = static_cast<int>(spec.dims.size());
    rep["class"] = spec.name;
    rep["out"] = out_path;
    emit(rep, g);
  });

  auto* volume = app.add_subcommand("volume", "Monte-Carlo volume over a slice");
  volume->fallthrough();
  volume->add_option("--kind", kind_name, "a|accessible or s|source")->required();
  volume->add_option("--anchor", anchor_path, "anchor state JSON file")->required();
  volume->add_option("--slice", slice_path, "slice JSON file")->required();
  volume->add_option("--samples", samples, "sample count")->capture_default_str();
  volume->callback([&] {
    loccn::VolumeKind kind;
    if (kind_name == "a" || kind_name == "accessible") {
      kind = loccn::VolumeKind::kAccessible;
    } else if (kind_name == "s" || kind_name == "source") {
      kind = loccn::VolumeKind::kSource;
    } else {
      throw std::invalid_argument("--kind: expected 'a' or 's'");
    }
    const loccn::ParsedState anchor = loccn::parse_state(loccn::json_from_file(anchor_path));
    const loccn::ParsedSlice slice = loccn::parse_slice(loccn::json_from_file(slice_path));
    if (anchor.spec.name != slice.spec.name)
      throw std::invalid_argument("volume: anchor and slice classes differ");
    const loccn::VolumeEstimate est =
        loccn::estimate_volume(kind, anchor.state, slice.slice, slice.spec.stabilizer, samples,
                               g.seed, g.threads);
    Json rep = header("volume", g);
    rep["kind"] = (kind == loccn::VolumeKind::kAccessible) ? "accessible" : "source";
    rep["model"] = "direct-chain";
    rep["estimate"] = loccn::volume_to_json(est);
    rep["slice"] = loccn::slice_to_json(slice.slice);
    emit(rep, g);
  });

  auto* demo = app.add_subcommand("demo", "headline demonstration runs");
  demo->fallthrough();
  demo->require_subcommand(1);

  auto* cor2 = demo->add_subcommand("corollary2", "reachable states have measure zero");
  cor2->fallthrough();
  cor2->add_option("--class", class_name, "built-in class name")->required();
  cor2->add_option("--samples", samples, "sample count")->capture_default_str();
  cor2->callback([&] {
    const loccn::ClassSpec* spec = loccn::find_builtin_class(class_name);
    if (spec == nullptr)
      throw std::invalid_argument("demo corollary2: unknown class '" + class_name + "'");
    const loccn::VolumeEstimate est =
        loccn::corollary2_fraction(*spec, samples, g.seed, g.threads);
    Json rep = header("demo corollary2", g);
    rep["class"] = class_name;
    rep["model"] = "uniform Bloch balls, reachability test";
    rep["estimate"] = loccn::volume_to_json(est);
    emit(rep, g);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
