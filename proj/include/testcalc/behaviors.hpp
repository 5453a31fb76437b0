#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "testcalc/error.hpp"

namespace testcalc::behaviors {

// Orders all-digit tokens numerically ("2" < "10"), everything else
// lexicographically after them.
struct NaturalLess {
  bool operator()(const std::string& a, const std::string& b) const;
};

using BehaviorId = std::string;
using BehaviorSet = std::set<BehaviorId, NaturalLess>;
using TestMap = std::map<std::string, BehaviorSet>;

BehaviorSet set_union(const BehaviorSet& a, const BehaviorSet& b);
BehaviorSet set_intersection(const BehaviorSet& a, const BehaviorSet& b);
BehaviorSet set_difference(const BehaviorSet& a, const BehaviorSet& b);
bool is_subset(const BehaviorSet& a, const BehaviorSet& of);

class UniverseViolation : public InputError {
 public:
  UniverseViolation(std::string_view set_name, const std::string& id)
      : InputError("behavior '" + id + "' in " + std::string(set_name) + " is not in the universe") {}
};

class InconsistentTestMap : public InputError {
 public:
  explicit InconsistentTestMap(const std::string& why) : InputError("inconsistent test map: " + why) {}
};

BehaviorSet covered(const TestMap& tests);

// Specified (S), programmed (P) and tested (T) behaviors inside an explicit
// universe. Constructed only through make(), which enforces the subset
// invariants and, when a test map is given, that its union is T.
class SptModel {
 public:
  static SptModel make(BehaviorSet universe, BehaviorSet specified, BehaviorSet programmed, BehaviorSet tested,
                       std::optional<TestMap> tests = std::nullopt);

  const BehaviorSet& universe() const noexcept { return universe_; }
  const BehaviorSet& specified() const noexcept { return s_; }
  const BehaviorSet& programmed() const noexcept { return p_; }
  const BehaviorSet& tested() const noexcept { return t_; }
  const std::optional<TestMap>& tests() const noexcept { return tests_; }

 private:
  SptModel() = default;
  BehaviorSet universe_, s_, p_, t_;
  std::optional<TestMap> tests_;
};

// Regions 1..8, stored at index 0..7:
//   1 S&P&T   2 (S&P)-T   3 (P&T)-S   4 (S&T)-P
//   5 S-(P|T) 6 P-(S|T)   7 T-(S|P)   8 U-(S|P|T)
struct RegionReport {
  std::array<BehaviorSet, 8> regions;

  const BehaviorSet& region(int number) const { return regions.at(static_cast<std::size_t>(number - 1)); }
};

// Region number for a membership triple.
int region_of(bool in_s, bool in_p, bool in_t);

RegionReport classify(const SptModel& m);

BehaviorSet faults_of_omission(const SptModel& m);    // S - P
BehaviorSet faults_of_commission(const SptModel& m);  // P - S
BehaviorSet correct_portion(const SptModel& m);       // S & P

enum class MethodKind { Functional, Structural };

std::string_view to_string(MethodKind kind);

struct MethodProfile {
  std::string name;
  MethodKind kind = MethodKind::Functional;
  TestMap tests;
};

struct ValidationReport {
  bool passed = false;
  BehaviorSet violations;  // T - S (functional) or T - P (structural)
  BehaviorSet redundancy;  // behaviors covered by two or more test cases
  BehaviorSet gaps;        // S - T (functional) or P - T (structural)
  std::size_t test_cases = 0;
};

// Requires the profile's test map to cover exactly m.tested().
// Throws InconsistentTestMap.
ValidationReport validate_method(const MethodProfile& profile, const SptModel& m);

struct MethodComparison {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t test_cases_a = 0;
  std::size_t test_cases_b = 0;
  BehaviorSet only_a;
  BehaviorSet only_b;
  BehaviorSet both;
  std::size_t region1_a = 0;  // |T_a & S & P|
  std::size_t region1_b = 0;
};

// Each method's T is the union of its own test map; S, P and the universe
// come from m. Throws UniverseViolation if a method covers ids outside it.
MethodComparison compare_methods(const MethodProfile& a, const MethodProfile& b, const SptModel& m);

// A finite relation between a domain and a codomain, checked for being a
// function separately.
class FunctionSpec {
 public:
  using Pair = std::pair<std::string, std::string>;

  // Throws InputError when a pair leaves the domain or codomain.
  FunctionSpec(std::vector<Pair> pairs, BehaviorSet domain, BehaviorSet codomain);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  const BehaviorSet& domain() const noexcept { return domain_; }
  const BehaviorSet& codomain() const noexcept { return codomain_; }

 private:
  std::vector<Pair> pairs_;
  BehaviorSet domain_, codomain_;
};

struct Witness {
  std::string input;
  std::string first;
  std::string second;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct WellDefinedness {
  bool well_defined = true;
  // Smallest offending input with its two smallest outputs.
  std::optional<Witness> witness;
};

WellDefinedness is_well_defined(const FunctionSpec& f);

class NotAFunction : public AnalysisError {
 public:
  explicit NotAFunction(const Witness& w)
      : AnalysisError("relation maps '" + w.input + "' to both '" + w.first + "' and '" + w.second + "'") {}
};

class OutOfDomain : public InputError {
 public:
  explicit OutOfDomain(const std::string& id) : InputError("'" + id + "' is not in the domain") {}
};

// { f(a) : a in subset }. Throws NotAFunction, OutOfDomain.
BehaviorSet image(const FunctionSpec& f, const BehaviorSet& subset);

}  // namespace testcalc::behaviors
