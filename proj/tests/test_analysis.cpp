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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "loccn/analysis.hpp"
#include "loccn/classes.hpp"
#include "loccn/feasible.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

using namespace loccn;

namespace {

const BlochVec kMixed{0.0, 0.0, 0.0};

StateInClass l_state(const BlochVec& b1, const BlochVec& b2, const BlochVec& b3 = kMixed,
                     const BlochVec& b4 = kMixed) {
  return StateInClass::from_bloch("L", {b1, b2, b3, b4});
}

LocalSymmetry string_of(const CMatrix& f, int n) {
  LocalSymmetry s;
  s.factors.assign(static_cast<std::size_t>(n), f);
  return s;
}

std::size_t locate(const StabilizerGroup& g, const CMatrix& factor) {
  const auto idx = find_element(g, string_of(factor, g.parties()));
  REQUIRE(idx.has_value());
  return *idx;
}

}  // namespace

TEST_CASE("reachability fires on exactly one blocking party") {
  const ClassSpec* L = find_builtin_class("L");
  REQUIRE(L != nullptr);

  // Party 1 on the cyclic axis, party 2 perpendicular to it: the axis strings
  // commute everywhere except at party 2.
  const ReachResult hit =
      check_reachable(l_state({0.2, 0.2, 0.2}, {0.1, -0.1, 0.0}), L->stabilizer);
  REQUIRE(hit.reachable);
  CHECK(hit.party == 1);
  REQUIRE(hit.symmetry >= 0);
  const LocalSymmetry& witness = L->stabilizer.elements[static_cast<std::size_t>(hit.symmetry)];
  const CMatrix g1 = bloch_encode({0.2, 0.2, 0.2});
  CHECK(commutes(g1, witness.factors[0]).first);
  CHECK_FALSE(commutes(bloch_encode({0.1, -0.1, 0.0}), witness.factors[1]).first);

  // The representative itself commutes with everything: no single blocker.
  CHECK_FALSE(check_reachable(l_state(kMixed, kMixed), L->stabilizer).reachable);

  // Two parties off every rotation axis block every symmetry twice over.
  CHECK_FALSE(
      check_reachable(l_state({0.1, 0.2, 0.05}, {0.17, -0.06, 0.11}), L->stabilizer).reachable);
}

TEST_CASE("reachability in the Pauli-string class") {
  const ClassSpec* p4 = find_builtin_class("pauli4");
  REQUIRE(p4 != nullptr);
  const StateInClass target =
      StateInClass::from_bloch("pauli4", {{0.1, 0.0, 0.0}, kMixed, kMixed, kMixed});
  const ReachResult hit = check_reachable(target, p4->stabilizer);
  REQUIRE(hit.reachable);
  CHECK(hit.party == 0);
}

TEST_CASE("one-round convertibility via the bilinear search") {
  const ClassSpec* L = find_builtin_class("L");
  // Party 2 z-aligned admits only the z string besides the identity.
  const StateInClass source = l_state({0.08, 0.08, 0.2}, {0.0, 0.0, 0.1});
  const ConvertResult r = check_convertible(source, L->stabilizer, 0);
  REQUIRE(r.status == Status::kCertifiedYes);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->party == 0);
  CHECK(r.residual <= 1e-8);
  CHECK(r.povm_residual <= 1e-8);
  CHECK(witness_residual(source, L->stabilizer, *r.witness) <= 1e-8);
  CHECK(witness_povm_residual(source, L->stabilizer, *r.witness) <= 1e-8);

  // Nontriviality: the target is no admissible conjugate of the source.
  const CMatrix g0 = source.ops[0];
  const CMatrix z = pauli(3);
  CHECK((r.witness->h_op - g0).frobenius_norm() > 1e-4);
  CHECK((r.witness->h_op - z * g0 * z).frobenius_norm() > 1e-4);
}

TEST_CASE("one-round convertibility via the commutant perturbation") {
  const ClassSpec* L = find_builtin_class("L");
  // All bystanders maximally mixed: the full group is admissible and the
  // cyclic strings commute with the acting operator.
  const StateInClass source = l_state({0.2, 0.2, 0.2}, kMixed);
  const ConvertResult r = check_convertible(source, L->stabilizer, 0);
  REQUIRE(r.status == Status::kCertifiedYes);
  CHECK(r.residual <= 1e-8);
  CHECK(r.povm_residual <= 1e-8);
  CHECK(witness_residual(source, L->stabilizer, *r.witness) <= 1e-8);
}

TEST_CASE("a generic bystander blocks every acting party") {
  const ClassSpec* L = find_builtin_class("L");
  const StateInClass blocked = l_state({0.3, 0.0, 0.0}, {0.1, 0.2, 0.05});
  // Party 1's operator commutes with no nontrivial factor, so every other
  // party is left with the identity alone.
  CHECK(check_convertible(blocked, L->stabilizer, 0).status == Status::kCertifiedNo);
  CHECK(check_convertible(blocked, L->stabilizer, 2).status == Status::kCertifiedNo);
  CHECK(admissible_set(blocked, L->stabilizer, 0).size() == 1);
}

TEST_CASE("hand-built witness reproduces its source exactly") {
  const ClassSpec* L = find_builtin_class("L");
  const StateInClass source = l_state({0.08, 0.08, 0.2}, kMixed);

  Witness w;
  w.party = 0;
  w.symmetries = {static_cast<int>(L->stabilizer.identity_index),
                  static_cast<int>(locate(L->stabilizer, pauli(3)))};
  w.p = {0.7, 0.3};
  w.h_op = bloch_encode({0.2, 0.2, 0.2});

  // 0.7 H + 0.3 Z H Z scales the equatorial components by 0.4: exactly G1.
  CHECK(witness_residual(source, L->stabilizer, w) <= 1e-14);
  CHECK(witness_povm_residual(source, L->stabilizer, w) <= 1e-14);

  // The same family at a different split misses the source.
  Witness off = w;
  off.p = {0.6, 0.4};
  CHECK(witness_residual(source, L->stabilizer, off) > 1e-3);
}

TEST_CASE("separable feasibility pins the unique distribution") {
  const ClassSpec* p4 = find_builtin_class("pauli4");
  const StateInClass target = StateInClass::from_bloch(
      "pauli4", {{0.1, 0.2, 0.05}, {0.0, 0.0, 0.1}, {0.0, 0.0, 0.15}, {0.0, 0.0, 0.2}});
  const std::size_t zi = locate(p4->stabilizer, pauli(3));
  const StateInClass source =
      sep_source_construct(target, p4->stabilizer.elements[zi], 0, 0.6);

  // The constructed source mixes party 1 along z and leaves the rest alone.
  const BlochVec g1 = source.bloch(0);
  CHECK(g1.x == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(g1.y == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(g1.z == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(state_distance(source.with_op(0, target.ops[0]), target) <= 1e-14);

  const SimplexFeasibility f = sep_check(source, target, p4->stabilizer);
  REQUIRE(f.status == Status::kCertifiedYes);
  REQUIRE(f.p.size() == 4);
  // The x and y strings flip the aligned bystanders, so their weights vanish
  // and the split is forced.
  CHECK(f.p[p4->stabilizer.identity_index] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(f.p[zi] == doctest::Approx(0.4).epsilon(1e-9));
  double rest = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    if (k != p4->stabilizer.identity_index && k != zi) rest += f.p[k];
  CHECK(rest <= 1e-9);

  // A source off the orbit hull of the target admits no distribution.
  const StateInClass bad = source.with_op(0, bloch_encode({0.3, 0.0, 0.0}));
  CHECK(sep_check(bad, target, p4->stabilizer).status == Status::kCertifiedNo);
}

TEST_CASE("separable feasibility covers the orthogonal-pair targets") {
  const ClassSpec* L = find_builtin_class("L");
  const StateInClass rep = l_state(kMixed, kMixed);
  const StateInClass target = l_state({0.3, 0.0, 0.0}, {0.0, 0.3, 0.0});
  const SimplexFeasibility f = sep_check(rep, target, L->stabilizer);
  CHECK(f.status == Status::kCertifiedYes);

  // Non-orthogonal Bloch pairs break the twirl and the feasibility with it.
  const StateInClass off = l_state({0.3, 0.0, 0.0}, {0.2, 0.3, 0.0});
  CHECK(sep_check(rep, off, L->stabilizer).status == Status::kCertifiedNo);
}

TEST_CASE("maximally entangled set membership with a deterministic step") {
  const ClassSpec* L = find_builtin_class("L");
  // Two parties on the cyclic axis: the cyclic strings commute everywhere,
  // and every other symmetry fails at both parties at once.
  CHECK(check_mes_convertible(l_state({0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}), L->stabilizer));
  // One party alone is reachable instead.
  CHECK_FALSE(check_mes_convertible(l_state({0.2, 0.2, 0.2}, kMixed), L->stabilizer));
  // Fully blocked states have no commuting symmetry to act with.
  CHECK_FALSE(
      check_mes_convertible(l_state({0.1, 0.2, 0.05}, {0.17, -0.06, 0.11}), L->stabilizer));
}

TEST_CASE("lock report captures unlocking through a measurement step") {
  const ClassSpec* L = find_builtin_class("L");
  const StateInClass before = l_state({0.08, 0.08, 0.2}, kMixed);

  Witness step;
  step.party = 0;
  step.symmetries = {static_cast<int>(L->stabilizer.identity_index),
                     static_cast<int>(locate(L->stabilizer, pauli(3)))};
  step.p = {0.7, 0.3};
  step.h_op = bloch_encode({0.2, 0.2, 0.2});

  const LockReport rpt = lock_report(before, L->stabilizer, &step);
  REQUIRE(rpt.before.size() == 4);
  REQUIRE(rpt.after.size() == 4);
  CHECK(rpt.before[0] == Status::kCertifiedYes);
  for (int j = 1; j < 4; ++j) CHECK(rpt.before[static_cast<std::size_t>(j)] == Status::kCertifiedNo);
  // Party 1 lands on the cyclic axis; the cyclic strings become admissible
  // for everyone else.
  for (int j = 0; j < 4; ++j) CHECK(rpt.after[static_cast<std::size_t>(j)] == Status::kCertifiedYes);
  CHECK(rpt.unlocked == std::vector<int>{1, 2, 3});
  CHECK(rpt.locked.empty());
  CHECK_FALSE(rpt.prop_commute);

  // Without a step only the before column is filled.
  const LockReport plain = lock_report(before, L->stabilizer);
  CHECK(plain.after.empty());
  CHECK(plain.unlocked.empty());
}

TEST_CASE("lock report captures locking in the Pauli-string class") {
  const ClassSpec* p4 = find_builtin_class("pauli4");
  const StateInClass rep =
      StateInClass::from_bloch("pauli4", {kMixed, kMixed, kMixed, kMixed});

  Witness step;
  step.party = 0;
  step.symmetries = {0, 1, 2, 3};
  step.p = {0.25, 0.25, 0.25, 0.25};
  step.h_op = bloch_encode({0.1, 0.2, 0.05});
  // The uniform average over the string sign flips cancels every component.
  CHECK(witness_residual(rep, p4->stabilizer, step) <= 1e-14);

  const LockReport rpt = lock_report(rep, p4->stabilizer, &step);
  for (int j = 0; j < 4; ++j) CHECK(rpt.before[static_cast<std::size_t>(j)] == Status::kCertifiedYes);
  CHECK(rpt.after[0] == Status::kCertifiedYes);
  for (int j = 1; j < 4; ++j) CHECK(rpt.after[static_cast<std::size_t>(j)] == Status::kCertifiedNo);
  CHECK(rpt.locked == std::vector<int>{1, 2, 3});
  CHECK(rpt.unlocked.empty());
  CHECK(rpt.prop_commute);
}

TEST_CASE("classification aggregates the taxonomy") {
  const ClassSpec* L = find_builtin_class("L");

  const Classification iso =
      classify(l_state({0.1, 0.2, 0.05}, {0.17, -0.06, 0.11}), L->stabilizer);
  CHECK_FALSE(iso.reach.reachable);
  CHECK(iso.mes_member);
  CHECK_FALSE(iso.mes_convertible);
  REQUIRE(iso.convertible.size() == 4);
  for (const auto& c : iso.convertible) CHECK(c.status == Status::kCertifiedNo);
  CHECK(iso.isolated == Status::kCertifiedYes);

  const Classification reach = classify(l_state({0.2, 0.2, 0.2}, {0.1, -0.1, 0.0}), L->stabilizer);
  CHECK(reach.reach.reachable);
  CHECK_FALSE(reach.mes_member);
  CHECK(reach.isolated == Status::kCertifiedNo);

  const Classification mes = classify(l_state({0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}), L->stabilizer);
  CHECK(mes.mes_member);
  CHECK(mes.mes_convertible);
  CHECK(mes.isolated == Status::kCertifiedNo);
}

TEST_CASE("analysis calls validate their inputs") {
  const ClassSpec* L = find_builtin_class("L");
  const StateInClass ok = l_state(kMixed, kMixed);
  CHECK_THROWS_AS(check_convertible(ok, L->stabilizer, 4), std::invalid_argument);
  CHECK_THROWS_AS(check_convertible(ok, L->stabilizer, -1), std::invalid_argument);

  // Mismatched party counts between state and group.
  const StateInClass pair = StateInClass::from_bloch("pair", {kMixed, kMixed});
  CHECK_THROWS_AS(check_reachable(pair, L->stabilizer), std::invalid_argument);
  CHECK_THROWS_AS(sep_check(ok, pair, L->stabilizer), std::invalid_argument);
}
