#include "testcalc/behaviors.hpp"

#include <algorithm>
#include <iterator>

namespace testcalc::behaviors {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_zeros(const std::string& s) {
  const auto first = s.find_first_not_of('0');
  return first == std::string::npos ? std::string_view("0") : std::string_view(s).substr(first);
}

void check_inside(std::string_view name, const BehaviorSet& s, const BehaviorSet& universe) {
  for (const auto& id : s)
    if (!universe.contains(id)) throw UniverseViolation(name, id);
}

}  // namespace

bool NaturalLess::operator()(const std::string& a, const std::string& b) const {
  const bool da = all_digits(a), db = all_digits(b);
  if (da != db) return da;
  if (da) {
    const auto sa = strip_zeros(a), sb = strip_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

BehaviorSet set_union(const BehaviorSet& a, const BehaviorSet& b) {
  BehaviorSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()), NaturalLess{});
  return out;
}

BehaviorSet set_intersection(const BehaviorSet& a, const BehaviorSet& b) {
  BehaviorSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()), NaturalLess{});
  return out;
}

BehaviorSet set_difference(const BehaviorSet& a, const BehaviorSet& b) {
  BehaviorSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()), NaturalLess{});
  return out;
}

bool is_subset(const BehaviorSet& a, const BehaviorSet& of) {
  return std::includes(of.begin(), of.end(), a.begin(), a.end(), NaturalLess{});
}

BehaviorSet covered(const TestMap& tests) {
  BehaviorSet out;
  for (const auto& [name, ids] : tests) out.insert(ids.begin(), ids.end());
  return out;
}

SptModel SptModel::make(BehaviorSet universe, BehaviorSet specified, BehaviorSet programmed, BehaviorSet tested,
                        std::optional<TestMap> tests) {
  check_inside("S", specified, universe);
  check_inside("P", programmed, universe);
  check_inside("T", tested, universe);
  if (tests) {
    for (const auto& [name, ids] : *tests) check_inside("test '" + name + "'", ids, universe);
    if (covered(*tests) != tested) throw InconsistentTestMap("union of test cases differs from T");
  }
  SptModel m;
  m.universe_ = std::move(universe);
  m.s_ = std::move(specified);
  m.p_ = std::move(programmed);
  m.t_ = std::move(tested);
  m.tests_ = std::move(tests);
  return m;
}

int region_of(bool in_s, bool in_p, bool in_t) {
  if (in_s && in_p) return in_t ? 1 : 2;
  if (in_p) return in_t ? 3 : 6;
  if (in_s) return in_t ? 4 : 5;
  return in_t ? 7 : 8;
}

RegionReport classify(const SptModel& m) {
  const auto& s = m.specified();
  const auto& p = m.programmed();
  const auto& t = m.tested();
  const auto sp = set_intersection(s, p);
  const auto all = set_union(set_union(s, p), t);

  RegionReport r;
  r.regions[0] = set_intersection(sp, t);
  r.regions[1] = set_difference(sp, t);
  r.regions[2] = set_difference(set_intersection(p, t), s);
  r.regions[3] = set_difference(set_intersection(s, t), p);
  r.regions[4] = set_difference(s, set_union(p, t));
  r.regions[5] = set_difference(p, set_union(s, t));
  r.regions[6] = set_difference(t, set_union(s, p));
  r.regions[7] = set_difference(m.universe(), all);
  return r;
}

BehaviorSet faults_of_omission(const SptModel& m) { return set_difference(m.specified(), m.programmed()); }

BehaviorSet faults_of_commission(const SptModel& m) { return set_difference(m.programmed(), m.specified()); }

BehaviorSet correct_portion(const SptModel& m) { return set_intersection(m.specified(), m.programmed()); }

std::string_view to_string(MethodKind kind) { return kind == MethodKind::Functional ? "functional" : "structural"; }

namespace {

BehaviorSet redundant(const TestMap& tests) {
  std::map<BehaviorId, std::size_t, NaturalLess> hits;
  for (const auto& [name, ids] : tests)
    for (const auto& id : ids) ++hits[id];
  BehaviorSet out;
  for (const auto& [id, n] : hits)
    if (n >= 2) out.insert(id);
  return out;
}

}  // namespace

ValidationReport validate_method(const MethodProfile& profile, const SptModel& m) {
  if (covered(profile.tests) != m.tested())
    throw InconsistentTestMap("method '" + profile.name + "' does not cover exactly T");
  const auto& reference = profile.kind == MethodKind::Functional ? m.specified() : m.programmed();
  ValidationReport r;
  r.violations = set_difference(m.tested(), reference);
  r.passed = r.violations.empty();
  r.redundancy = redundant(profile.tests);
  r.gaps = set_difference(reference, m.tested());
  r.test_cases = profile.tests.size();
  return r;
}

MethodComparison compare_methods(const MethodProfile& a, const MethodProfile& b, const SptModel& m) {
  const auto ta = covered(a.tests);
  const auto tb = covered(b.tests);
  check_inside("method '" + a.name + "'", ta, m.universe());
  check_inside("method '" + b.name + "'", tb, m.universe());
  const auto sp = correct_portion(m);

  MethodComparison c;
  c.size_a = ta.size();
  c.size_b = tb.size();
  c.test_cases_a = a.tests.size();
  c.test_cases_b = b.tests.size();
  c.only_a = set_difference(ta, tb);
  c.only_b = set_difference(tb, ta);
  c.both = set_intersection(ta, tb);
  c.region1_a = set_intersection(ta, sp).size();
  c.region1_b = set_intersection(tb, sp).size();
  return c;
}

FunctionSpec::FunctionSpec(std::vector<Pair> pairs, BehaviorSet domain, BehaviorSet codomain)
    : pairs_(std::move(pairs)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
  for (const auto& [a, b] : pairs_) {
    if (!domain_.contains(a)) throw OutOfDomain(a);
    if (!codomain_.contains(b)) throw InputError("'" + b + "' is not in the codomain");
  }
}

WellDefinedness is_well_defined(const FunctionSpec& f) {
  std::map<std::string, BehaviorSet, NaturalLess> outputs;
  for (const auto& [a, b] : f.pairs()) outputs[a].insert(b);
  for (const auto& [a, bs] : outputs) {
    if (bs.size() > 1) return {false, Witness{a, *bs.begin(), *std::next(bs.begin())}};
  }
  return {true, std::nullopt};
}

BehaviorSet image(const FunctionSpec& f, const BehaviorSet& subset) {
  if (auto wd = is_well_defined(f); !wd.well_defined) throw NotAFunction(*wd.witness);
  for (const auto& a : subset)
    if (!f.domain().contains(a)) throw OutOfDomain(a);
  BehaviorSet out;
  for (const auto& [a, b] : f.pairs())
    if (subset.contains(a)) out.insert(b);
  return out;
}

}  // namespace testcalc::behaviors
