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

#include "loccn/io.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loccn {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

const Json& require_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int require_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& require_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

/// True when the operator is a bit-exactly recoverable Bloch encoding,
/// which is what makes bloch output lossless.
bool bloch_exact(const CMatrix& op, BlochVec* out) {
  if (op.rows() != 2 || op.cols() != 2) return false;
  BlochVec g;
  try {
    g = bloch_decode(op, 1e-9);
  } catch (const std::exception&) {
    return false;
  }
  const CMatrix enc = bloch_encode(g);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      if (enc(r, c).real() != op(r, c).real() || enc(r, c).imag() != op(r, c).imag())
        return false;
    }
  }
  *out = g;
  return true;
}

Json party_entry_to_json(const CMatrix& op) {
  Json entry;
  BlochVec g;
  if (bloch_exact(op, &g)) {
    entry["bloch"] = Json::array({g.x, g.y, g.z});
  } else {
    entry["matrix"] = matrix_to_json(op);
  }
  return entry;
}

/// expected_dim < 0 accepts any square matrix; bloch entries always mean a
/// qubit party.
CMatrix parse_party_entry(const Json& entry, int expected_dim, const std::string& where) {
  if (!entry.is_object()) fail(where, "expected an object");
  const bool has_bloch = entry.contains("bloch");
  const bool has_matrix = entry.contains("matrix");
  if (has_bloch == has_matrix) fail(where, "exactly one of 'bloch' or 'matrix' required");
  if (has_bloch) {
    if (expected_dim >= 0 && expected_dim != 2)
      fail(where, "bloch entries are only valid for qubit parties");
    const Json& b = entry["bloch"];
    if (!b.is_array() || b.size() != 3) fail(where, "expected bloch [x, y, z]");
    return bloch_encode({require_number(b[0], where + ".bloch"),
                         require_number(b[1], where + ".bloch"),
                         require_number(b[2], where + ".bloch")});
  }
  CMatrix op = json_to_matrix(entry["matrix"], where + ".matrix");
  if (expected_dim >= 0 && (op.rows() != static_cast<std::size_t>(expected_dim) ||
                            op.cols() != static_cast<std::size_t>(expected_dim)))
    fail(where, "matrix dimension disagrees with dims");
  return op;
}

Json leaf_to_json(const StateInClass& s) {
  Json j;
  j["class"] = s.class_id;
  Json parties = Json::array();
  for (const CMatrix& op : s.ops) parties.push_back(party_entry_to_json(op));
  j["parties"] = std::move(parties);
  return j;
}

StateInClass leaf_from_json(const Json& j, const std::string& where) {
  const Json& jc = require_field(j, "class", where);
  std::string name;
  if (jc.is_string()) {
    name = jc.get<std::string>();
  } else {
    name = require_string(require_field(jc, "name", where + ".class"), where + ".class.name");
  }
  const Json& parties = require_array(require_field(j, "parties", where), where + ".parties");
  if (parties.empty()) fail(where + ".parties", "no parties");
  std::vector<CMatrix> ops;
  ops.reserve(parties.size());
  for (std::size_t i = 0; i < parties.size(); ++i) {
    ops.push_back(
        parse_party_entry(parties[i], -1, where + ".parties[" + std::to_string(i) + "]"));
  }
  try {
    return StateInClass::make(std::move(name), std::move(ops));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

StateInClass parse_party_ops(const Json& j, const std::string& class_name,
                             const std::vector<int>& dims, const std::string& where) {
  const Json& parties = require_array(require_field(j, "parties", where), where + ".parties");
  if (parties.size() != dims.size()) fail(where, "party count disagrees with dims");
  std::vector<CMatrix> ops;
  ops.reserve(parties.size());
  for (std::size_t i = 0; i < parties.size(); ++i) {
    ops.push_back(parse_party_entry(parties[i], dims[i],
                                    where + ".parties[" + std::to_string(i) + "]"));
  }
  try {
    return StateInClass::make(class_name, std::move(ops));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json json_from_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

Json json_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return json_from_text(buf.str(), path);
}

void json_to_file(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << dump_json(j);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex json_to_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
  return {require_number(j[0], where), require_number(j[1], where)};
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix json_to_matrix(const Json& j, const std::string& where) {
  require_array(j, where);
  const std::size_t nr = j.size();
  if (nr == 0) fail(where, "empty matrix");
  const Json& first = require_array(j[0], where);
  const std::size_t nc = first.size();
  if (nc == 0) fail(where, "empty matrix row");
  CMatrix m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    const Json& row = require_array(j[r], where);
    if (row.size() != nc) fail(where, "ragged matrix rows");
    for (std::size_t c = 0; c < nc; ++c) {
      m(r, c) = json_to_complex(row[c], where);
    }
  }
  return m;
}

Json class_to_json(const ClassSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["dims"] = spec.dims;
  Json amps = Json::array();
  for (const Complex& a : spec.representative.amps) amps.push_back(complex_to_json(a));
  j["representative"] = std::move(amps);
  Json elems = Json::array();
  for (const LocalSymmetry& s : spec.stabilizer.elements) {
    Json factors = Json::array();
    for (const CMatrix& f : s.factors) factors.push_back(matrix_to_json(f));
    elems.push_back(std::move(factors));
  }
  j["stabilizer"] = std::move(elems);
  return j;
}

ClassSpec json_to_class(const Json& j) {
  const std::string where = "class";
  const std::string name = require_string(require_field(j, "name", where), where + ".name");
  if (name.empty()) fail(where + ".name", "empty class name");

  std::vector<int> dims;
  for (const Json& d : require_array(require_field(j, "dims", where), where + ".dims")) {
    const int v = require_int(d, where + ".dims");
    if (v < 2) fail(where + ".dims", "local dimensions must be at least 2");
    dims.push_back(v);
  }
  if (dims.empty()) fail(where + ".dims", "no parties");
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);

  const Json& ja = require_array(require_field(j, "representative", where),
                                 where + ".representative");
  if (ja.size() != total) fail(where + ".representative", "length disagrees with dims");
  std::vector<Complex> amps;
  amps.reserve(total);
  for (const Json& a : ja) amps.push_back(json_to_complex(a, where + ".representative"));
  StateVector rep(dims, std::move(amps));
  if (std::abs(rep.norm() - 1.0) > 1e-8)
    fail(where + ".representative", "representative is not normalized");

  const Json& je = require_array(require_field(j, "stabilizer", where), where + ".stabilizer");
  if (je.empty()) fail(where + ".stabilizer", "empty stabilizer");
  StabilizerGroup group;
  for (std::size_t k = 0; k < je.size(); ++k) {
    const std::string ewhere = where + ".stabilizer[" + std::to_string(k) + "]";
    const Json& jf = require_array(je[k], ewhere);
    if (jf.size() != dims.size()) fail(ewhere, "factor count disagrees with dims");
    LocalSymmetry s;
    for (std::size_t i = 0; i < jf.size(); ++i) {
      CMatrix f = json_to_matrix(jf[i], ewhere);
      if (f.rows() != static_cast<std::size_t>(dims[i]) || f.cols() != f.rows())
        fail(ewhere, "factor dimension disagrees with dims");
      if (!f.is_unitary(1e-8)) fail(ewhere, "factor is not unitary");
      s.factors.push_back(std::move(f));
    }
    group.elements.push_back(std::move(s));
  }

  const LocalSymmetry ident = symmetry_identity(dims);
  bool found_identity = false;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (tensor_equal(group.elements[k], ident, 1e-8)) {
      group.identity_index = k;
      found_identity = true;
      break;
    }
  }
  if (!found_identity) fail(where + ".stabilizer", "missing the identity element");

  const std::vector<double> residuals = verify_stabilizer(rep, group);
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    if (residuals[k] > 1e-8)
      fail(where + ".stabilizer[" + std::to_string(k) + "]",
           "element does not stabilize the representative");
  }
  if (group.size() <= 32) {
    for (const LocalSymmetry& a : group.elements) {
      for (const LocalSymmetry& b : group.elements) {
        if (!find_element(group, symmetry_product(a, b), 1e-8).has_value())
          fail(where + ".stabilizer", "set is not closed under products");
      }
    }
  }

  ClassSpec spec;
  spec.name = name;
  spec.dims = std::move(dims);
  spec.representative = std::move(rep);
  spec.stabilizer = std::move(group);
  return spec;
}

Json state_to_json(const StateInClass& state, const ClassSpec* inline_spec) {
  Json j;
  j["n"] = state.parties();
  Json dims = Json::array();
  for (const CMatrix& op : state.ops) dims.push_back(static_cast<int>(op.rows()));
  j["dims"] = std::move(dims);
  if (inline_spec != nullptr) {
    j["class"] = class_to_json(*inline_spec);
  } else {
    j["class"] = state.class_id;
  }
  Json parties = Json::array();
  for (const CMatrix& op : state.ops) parties.push_back(party_entry_to_json(op));
  j["parties"] = std::move(parties);
  return j;
}

ParsedState parse_state(const Json& j) {
  const std::string where = "state";
  const int n = require_int(require_field(j, "n", where), where + ".n");
  std::vector<int> dims;
  for (const Json& d : require_array(require_field(j, "dims", where), where + ".dims")) {
    dims.push_back(require_int(d, where + ".dims"));
  }
  if (static_cast<int>(dims.size()) != n) fail(where, "n disagrees with dims");

  const Json& jc = require_field(j, "class", where);
  ClassSpec spec;
  if (jc.is_string()) {
    const std::string name = jc.get<std::string>();
    const ClassSpec* builtin = find_builtin_class(name);
    if (builtin == nullptr) fail(where + ".class", "unknown class '" + name + "'");
    spec = *builtin;
  } else {
    spec = json_to_class(jc);
  }
  if (spec.dims != dims) fail(where, "dims disagree with the class");

  ParsedState out;
  out.state = parse_party_ops(j, spec.name, dims, where);
  out.spec = std::move(spec);
  return out;
}

Json witness_to_json(const Witness& w) {
  Json j;
  j["party"] = w.party;
  j["symmetries"] = w.symmetries;
  j["p"] = w.p;
  j["h"] = matrix_to_json(w.h_op);
  return j;
}

Witness json_to_witness(const Json& j) {
  const std::string where = "witness";
  Witness w;
  w.party = require_int(require_field(j, "party", where), where + ".party");
  for (const Json& s :
       require_array(require_field(j, "symmetries", where), where + ".symmetries")) {
    w.symmetries.push_back(require_int(s, where + ".symmetries"));
  }
  for (const Json& pk : require_array(require_field(j, "p", where), where + ".p")) {
    w.p.push_back(require_number(pk, where + ".p"));
  }
  w.h_op = json_to_matrix(require_field(j, "h", where), where + ".h");
  return w;
}

Json tree_to_json(const ProtocolTree& t) {
  Json nodes = Json::array();
  for (const ProtocolNode& node : t.nodes) {
    Json jn;
    jn["party"] = node.party;
    Json outs = Json::array();
    for (const ProtocolOutcome& out : node.outcomes) {
      Json jo;
      jo["measurement"] = matrix_to_json(out.measurement);
      if (!out.unitaries.empty()) {
        Json us = Json::array();
        for (const CMatrix& u : out.unitaries) us.push_back(matrix_to_json(u));
        jo["unitaries"] = std::move(us);
      }
      if (out.child >= 0) jo["child"] = out.child;
      if (out.leaf.has_value()) jo["leaf"] = leaf_to_json(*out.leaf);
      outs.push_back(std::move(jo));
    }
    jn["outcomes"] = std::move(outs);
    nodes.push_back(std::move(jn));
  }
  Json j;
  j["nodes"] = std::move(nodes);
  return j;
}

ProtocolTree json_to_tree(const Json& j) {
  const std::string where = "protocol";
  ProtocolTree t;
  const Json& nodes = require_array(require_field(j, "nodes", where), where + ".nodes");
  for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
    const std::string nwhere = where + ".nodes[" + std::to_string(idx) + "]";
    const Json& jn = nodes[idx];
    ProtocolNode node;
    node.party = require_int(require_field(jn, "party", nwhere), nwhere + ".party");
    const Json& outs = require_array(require_field(jn, "outcomes", nwhere),
                                     nwhere + ".outcomes");
    for (std::size_t k = 0; k < outs.size(); ++k) {
      const std::string owhere = nwhere + ".outcomes[" + std::to_string(k) + "]";
      const Json& jo = outs[k];
      ProtocolOutcome out;
      out.measurement =
          json_to_matrix(require_field(jo, "measurement", owhere), owhere + ".measurement");
      if (jo.contains("unitaries")) {
        for (const Json& ju : require_array(jo["unitaries"], owhere + ".unitaries")) {
          out.unitaries.push_back(json_to_matrix(ju, owhere + ".unitaries"));
        }
      }
      if (jo.contains("child")) out.child = require_int(jo["child"], owhere + ".child");
      if (jo.contains("leaf")) out.leaf = leaf_from_json(jo["leaf"], owhere + ".leaf");
      node.outcomes.push_back(std::move(out));
    }
    t.nodes.push_back(std::move(node));
  }
  return t;
}

Json slice_to_json(const Slice& slice, const ClassSpec* inline_spec) {
  Json j;
  switch (slice.kind) {
    case Slice::Kind::kPartyBall:
      j["kind"] = "party-ball";
      break;
    case Slice::Kind::kSegment:
      j["kind"] = "segment";
      break;
    case Slice::Kind::kCustom:
      j["kind"] = "custom";
      break;
  }
  j["party"] = slice.party;
  j["base"] = state_to_json(slice.base, inline_spec);
  if (slice.kind == Slice::Kind::kSegment) {
    j["h"] = party_entry_to_json(slice.h_op);
    Json factors = Json::array();
    for (const CMatrix& f : slice.symmetry.factors) factors.push_back(matrix_to_json(f));
    Json sym;
    sym["factors"] = std::move(factors);
    j["symmetry"] = std::move(sym);
  }
  if (slice.kind == Slice::Kind::kCustom) j["sampler"] = slice.sampler;
  return j;
}

ParsedSlice parse_slice(const Json& j) {
  const std::string where = "slice";
  const std::string kind = require_string(require_field(j, "kind", where), where + ".kind");
  ParsedState base = parse_state(require_field(j, "base", where));

  if (kind == "party-ball") {
    const int party = require_int(require_field(j, "party", where), where + ".party");
    ParsedSlice out;
    try {
      out.slice = party_ball_slice(std::move(base.state), party);
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
    out.spec = std::move(base.spec);
    return out;
  }
  if (kind == "segment") {
    const int party = require_int(require_field(j, "party", where), where + ".party");
    if (party < 0 || party >= base.state.parties()) fail(where + ".party", "out of range");
    const CMatrix h = parse_party_entry(require_field(j, "h", where), base.spec.dims[party],
                                        where + ".h");
    const Json& js = require_field(j, "symmetry", where);
    LocalSymmetry sym;
    if (js.is_number_integer()) {
      const int k = js.get<int>();
      if (k < 0 || k >= static_cast<int>(base.spec.stabilizer.size()))
        fail(where + ".symmetry", "index out of range");
      sym = base.spec.stabilizer.elements[static_cast<std::size_t>(k)];
    } else {
      const Json& fs = require_array(require_field(js, "factors", where + ".symmetry"),
                                     where + ".symmetry.factors");
      if (static_cast<int>(fs.size()) != base.state.parties())
        fail(where + ".symmetry.factors", "factor count disagrees with parties");
      for (std::size_t i = 0; i < fs.size(); ++i) {
        CMatrix f = json_to_matrix(fs[i], where + ".symmetry.factors");
        if (!f.is_unitary(1e-8)) fail(where + ".symmetry.factors", "factor is not unitary");
        sym.factors.push_back(std::move(f));
      }
    }
    ParsedSlice out;
    try {
      out.slice = segment_slice(std::move(base.state), party, h, std::move(sym));
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
    out.spec = std::move(base.spec);
    return out;
  }
  if (kind == "custom") {
    const std::string id =
        require_string(require_field(j, "sampler", where), where + ".sampler");
    ParsedSlice out;
    out.slice = custom_slice(std::move(base.state), id);
    out.spec = std::move(base.spec);
    return out;
  }
  fail(where + ".kind", "expected 'party-ball', 'segment' or 'custom'");
}

Json feasibility_to_json(const SimplexFeasibility& f) {
  Json j;
  j["status"] = to_string(f.status);
  j["p"] = f.p;
  j["residual"] = f.residual;
  if (f.plane_ok.has_value()) j["plane_ok"] = *f.plane_ok;
  return j;
}

Json witness_opt_to_json(const ConvertResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["residual"] = r.residual;
  j["povm_residual"] = r.povm_residual;
  if (r.witness.has_value()) j["witness"] = witness_to_json(*r.witness);
  return j;
}

Json run_report_to_json(const RunReport& r) {
  Json j;
  j["deterministic"] = r.deterministic;
  j["matches_declared"] = r.matches_declared;
  j["total_probability"] = r.total_probability;
  j["max_povm_residual"] = r.max_povm_residual;
  Json leaves = Json::array();
  for (const BranchLeaf& leaf : r.leaves) {
    Json jl;
    jl["path"] = leaf.path;
    jl["probability"] = leaf.probability;
    jl["matches_declared"] = leaf.matches_declared;
    jl["state"] = leaf_to_json(leaf.state);
    leaves.push_back(std::move(jl));
  }
  j["leaves"] = std::move(leaves);
  return j;
}

Json volume_to_json(const VolumeEstimate& v) {
  Json j;
  j["hits"] = v.hits;
  j["samples"] = v.samples;
  j["fraction"] = v.fraction;
  j["half_width"] = v.half_width;
  j["seed"] = v.seed;
  return j;
}

}  // namespace loccn
