#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "../oracle/oracles.hpp"
#include "support.hpp"
#include "tlc/error.hpp"
#include "tlc/planner.hpp"

using namespace tlc;

namespace {

NodeId N(char c) { return *node_from_letter(c); }
NodePair P(const char* s) { return *NodePair::parse(s); }

std::set<std::string> names(const std::vector<NodePair>& pairs) {
  std::set<std::string> out;
  for (const auto& p : pairs) out.insert(p.to_string());
  return out;
}

QueueSnapshot snapshot(const std::array<int, kNodeCount>& q) {
  return QueueSnapshot::from_matrix(testing_support::queues_matrix(q));
}

oracle::PhaseTimeInput oracle_input(const QueueSnapshot& s, const NodePair& cur, const NodePair& next,
                                    const TimingConfig& cfg) {
  oracle::PhaseTimeInput in{};
  for (NodeId n : kAllNodes) {
    in.queue[to_direction_index(n)] = s.queued[index_of(n)];
    in.fva[to_direction_index(n)] = s.confirmed[index_of(n)] ? 1 : 0;
  }
  in.current1 = to_letter(cur.first());
  in.current2 = to_letter(cur.second());
  in.next1 = to_letter(next.first());
  in.next2 = to_letter(next.second());
  in.full_cycle = cfg.full_cycle_s;
  in.min_green = cfg.min_green_s;
  in.aggregation = cfg.aggregation == Aggregation::Min ? 0 : cfg.aggregation == Aggregation::Avg ? 1 : 2;
  in.own_queue = cfg.denominator == DenominatorRule::OwnQueueIncluded;
  return in;
}

QueueSnapshot random_snapshot(std::mt19937_64& rng) {
  QueueSnapshot s;
  std::uniform_int_distribution<int> q(0, 200);
  std::bernoulli_distribution confirmed(0.8);
  for (std::size_t i = 0; i < kNodeCount; ++i) {
    s.confirmed[i] = confirmed(rng);
    s.queued[i] = s.confirmed[i] ? q(rng) : 0;
  }
  return s;
}

}  // namespace

TEST_CASE("worked example: candidates after AB") {
  const auto c = candidate_pairs(N('A'), N('B'));
  CHECK(names(c) == std::set<std::string>{"CD", "CF", "EF", "CG", "GH", "DH", "EH"});
  CHECK(c.size() == 7);
}

TEST_CASE("worked example: C and G heaviest elects GC") {
  LoadVector loads;
  loads[N('C')] = 90;
  loads[N('G')] = 80;
  loads[N('D')] = 10;
  loads[N('H')] = 10;
  loads[N('E')] = 5;
  loads[N('F')] = 5;
  const auto c = candidate_pairs(P("AB"));
  CHECK(select_next_phase(c, loads) == P("GC"));
}

TEST_CASE("every phase has successors and never repeats itself") {
  for (const auto& phase : enumerate_phases()) {
    const auto c = candidate_pairs(phase);
    CHECK_FALSE(c.empty());
    for (const auto& p : c) {
      CHECK(p != phase);
      CHECK(is_legal_phase(p));
      CHECK((adjacent(p.first(), phase.first()) || adjacent(p.first(), phase.second()) ||
             adjacent(p.second(), phase.first()) || adjacent(p.second(), phase.second())));
    }
    CHECK(names(c).size() == c.size());
  }
}

TEST_CASE("illegal current phase is a contract violation") {
  CHECK_THROWS_AS(candidate_pairs(N('A'), N('C')), ContractViolation);
}

TEST_CASE("ties break lexicographically") {
  const auto c = candidate_pairs(P("AB"));
  CHECK(select_next_phase(c, LoadVector{}) == P("CD"));
}

TEST_CASE("selection after AB with post-emergency loads is CD") {
  const auto loads = compute_loads(testing_support::post_emergency_matrix(), LoadWeights{});
  CHECK(select_next_phase(candidate_pairs(P("AB")), loads) == P("CD"));
  const auto plan = plan_next_phase(P("AB"), testing_support::post_emergency_matrix(), TimingConfig{}, LoadWeights{});
  CHECK(plan.pair == P("CD"));
}

TEST_CASE("hand case: AB to GC gives 36.67 s") {
  const auto s = snapshot({0, 0, 100, 100, 75, 75, 50, 50});
  const auto b = next_phase_time_breakdown(s, P("AB"), P("GC"), TimingConfig{});
  // next.first() is C, next.second() is G after normalization
  CHECK(b.first_side_s == doctest::Approx(100.0 / 225.0 * 120.0));
  CHECK(b.second_side_s == doctest::Approx(20.0));
  CHECK(b.green_s == doctest::Approx(36.67).epsilon(0.01 / 36.67));
  CHECK(oracle::phase_time(oracle_input(s, P("AB"), P("GC"), TimingConfig{})) == doctest::Approx(110.0 / 3.0));
}

TEST_CASE("sole demand gives the full cycle, no demand gives the minimum") {
  const auto alone = snapshot({0, 0, 40, 0, 0, 0, 0, 0});
  TimingConfig cfg;
  cfg.aggregation = Aggregation::Max;
  CHECK(next_phase_time_breakdown(alone, P("AB"), P("CD"), cfg).first_side_s == doctest::Approx(120.0));
  CHECK(next_phase_time(snapshot({}), P("AB"), P("CD"), TimingConfig{}) == TimingConfig{}.min_green_s);
}

TEST_CASE("property: matches the straight-line reference on random inputs") {
  std::mt19937_64 rng(2024);
  const auto phases = enumerate_phases();
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto s = random_snapshot(rng);
    const auto cur = phases[rng() % phases.size()];
    const auto cands = candidate_pairs(cur);
    const auto next = cands[rng() % cands.size()];
    TimingConfig cfg;
    cfg.aggregation = static_cast<Aggregation>(trial % 3);
    const double got = next_phase_time(s, cur, next, cfg);
    const double want = oracle::phase_time(oracle_input(s, cur, next, cfg));
    CHECK(std::abs(got - want) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("property: strict reading also matches the reference") {
  std::mt19937_64 rng(77);
  const auto phases = enumerate_phases();
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_snapshot(rng);
    const auto cur = phases[rng() % phases.size()];
    const auto cands = candidate_pairs(cur);
    const auto next = cands[rng() % cands.size()];
    TimingConfig cfg;
    cfg.denominator = DenominatorRule::AdjacentOnly;
    CHECK(std::abs(next_phase_time(s, cur, next, cfg) - oracle::phase_time(oracle_input(s, cur, next, cfg))) <= 1e-9);
  }
}

TEST_CASE("property: bounds, side ratios and aggregation order") {
  std::mt19937_64 rng(5);
  const auto phases = enumerate_phases();
  for (int trial = 0; trial < 3000; ++trial) {
    const auto s = random_snapshot(rng);
    const auto cur = phases[rng() % phases.size()];
    const auto cands = candidate_pairs(cur);
    const auto next = cands[rng() % cands.size()];
    TimingConfig cfg;
    double by_agg[3];
    for (int a = 0; a < 3; ++a) {
      cfg.aggregation = static_cast<Aggregation>(a);
      const auto b = next_phase_time_breakdown(s, cur, next, cfg);
      CHECK(b.green_s >= cfg.min_green_s);
      CHECK(b.green_s <= cfg.full_cycle_s);
      CHECK(b.first_side_s >= 0.0);
      CHECK(b.first_side_s <= cfg.full_cycle_s + 1e-9);
      CHECK(b.second_side_s >= 0.0);
      CHECK(b.second_side_s <= cfg.full_cycle_s + 1e-9);
      by_agg[a] = b.green_s;
    }
    CHECK(by_agg[0] <= by_agg[1]);
    CHECK(by_agg[1] <= by_agg[2]);
  }
}

TEST_CASE("property: selection is scale invariant and stays legal") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 500.0);
  std::uniform_int_distribution<int> exponent(-10, 10);
  const auto phases = enumerate_phases();
  for (int trial = 0; trial < 3000; ++trial) {
    LoadVector loads, scaled;
    // integer loads and power-of-two factors keep the sums exact
    const double factor = std::ldexp(1.0, exponent(rng));
    for (NodeId n : kAllNodes) {
      loads[n] = std::floor(u(rng));
      scaled[n] = loads[n] * factor;
    }
    const auto cur = phases[rng() % phases.size()];
    const auto cands = candidate_pairs(cur);
    const auto pick = select_next_phase(cands, loads);
    CHECK(std::find(cands.begin(), cands.end(), pick) != cands.end());
    CHECK(select_next_phase(cands, scaled) == pick);
    double best = -1;
    for (const auto& p : cands) best = std::max(best, loads[p.first()] + loads[p.second()]);
    CHECK(loads[pick.first()] + loads[pick.second()] == best);
  }
}

TEST_CASE("timing validation") {
  TimingConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.min_green_s = 40.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = TimingConfig{};
  cfg.intergreen_s = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}
