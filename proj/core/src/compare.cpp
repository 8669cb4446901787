#include "ldq/compare.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ldq/errors.hpp"

namespace ldq {
namespace {

std::vector<Valuation> Sorted(std::vector<Valuation> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool IsSubset(const std::vector<Valuation>& small,
              const std::vector<Valuation>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<std::vector<std::size_t>> Orders(std::size_t n,
                                             const CompareOptions& o) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  if (n <= o.max_exhaustive_patterns) {
    do {
      out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  std::mt19937_64 rng(o.seed);
  std::set<std::vector<std::size_t>> seen;
  out.push_back(perm);
  seen.insert(perm);
  for (std::size_t k = 0; k < o.sampled_orders; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (seen.insert(perm).second) out.push_back(perm);
  }
  return out;
}

}  // namespace

bool CompareReport::LtbEqual() const {
  return std::all_of(ltb.begin(), ltb.end(),
                     [](const LtbOutcome& r) { return r.equal; });
}

bool CompareReport::IteratorSubset() const {
  return std::all_of(iterator.begin(), iterator.end(),
                     [](const IteratorOutcome& r) { return r.subset; });
}

bool CompareReport::IteratorStrict() const {
  return std::any_of(iterator.begin(), iterator.end(),
                     [](const IteratorOutcome& r) { return r.strict; });
}

std::string CompareReport::Summary() const {
  std::string out = "oracle=" + std::to_string(oracle.size()) +
                    " machine=" + std::to_string(machine.size()) +
                    (machine_equal ? "(=)" : "(!=)");
  for (const auto& r : ltb) {
    out += " ltb[" + r.policy + "]=" + std::to_string(r.solutions.size()) +
           (r.equal ? "(=)" : "(!=)");
  }
  std::size_t strict = 0, violations = 0;
  for (const auto& r : iterator) {
    strict += r.strict;
    violations += !r.subset;
  }
  if (!iterator.empty()) {
    out += " iterator orders=" + std::to_string(iterator.size()) +
           " strict=" + std::to_string(strict) +
           " violations=" + std::to_string(violations);
  }
  return out;
}

CompareReport CompareEngines(const Web& w, const QuerySpec& q,
                             const CompareOptions& options) {
  if (!w.IsFinite()) throw InfiniteWeb("engine comparison needs a finite web");
  CompareReport report;
  report.oracle = OracleEvaluate(w, q, std::nullopt).solutions;

  EngineOptions eo;
  eo.expansion = options.expansion;
  EngineRun machine = RunMachine(w, q, {}, eo);
  report.machine = Sorted(machine.solutions);
  report.machine_equal = report.machine == report.oracle;
  report.machine_exhausted = machine.exhausted;

  if (q.criterion.kind() != ReachabilityCriterion::Kind::kMatch) return report;

  for (const TaskPolicy& policy : options.policies) {
    eo.policy = policy;
    EngineRun run = RunLtb(w, q, {}, eo);
    LtbOutcome r{policy.name(), Sorted(run.solutions), false, run.stats};
    r.equal = r.solutions == report.oracle;
    report.ltb.push_back(std::move(r));
  }
  eo.policy = TaskPolicy::Fifo();
  for (auto& order : Orders(q.pattern.size(), options)) {
    EngineRun run = RunIterator(w, q, order, {}, eo);
    IteratorOutcome r{order, Sorted(run.solutions), true, false, run.stats};
    r.subset = IsSubset(r.solutions, report.oracle);
    r.strict = r.subset && r.solutions.size() < report.oracle.size();
    report.iterator.push_back(std::move(r));
  }
  return report;
}

}  // namespace ldq
