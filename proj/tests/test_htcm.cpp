#include <doctest.h>

#include <cmath>
#include <map>

#include "netspect/htcm.hpp"
#include "netspect/math.hpp"
#include "netspect/rng.hpp"
#include "netspect/spectrum.hpp"
#include "netspect/synth.hpp"
#include "test_support.hpp"

using namespace netspect;

namespace {

PartitionEdit random_edit(const WindowPartition& p, Rng& rng) {
  for (;;) {
    const auto kind = rng.uniform_int(0, 2);
    const auto z = p.window_count();
    if (kind == 0) {
      const auto tau = static_cast<std::int32_t>(rng.uniform_int(0, z - 1));
      const std::int32_t width = p.widths()[static_cast<std::size_t>(tau)];
      if (width < 2) continue;
      return PartitionEdit{PartitionEdit::Kind::split, tau,
                           static_cast<std::int32_t>(rng.uniform_int(1, width - 1))};
    }
    if (z < 2) continue;
    const auto tau = static_cast<std::int32_t>(rng.uniform_int(0, z - 2));
    if (kind == 1) return PartitionEdit{PartitionEdit::Kind::join, tau, 0};
    const std::int32_t merged =
        p.widths()[static_cast<std::size_t>(tau)] + p.widths()[static_cast<std::size_t>(tau) + 1];
    return PartitionEdit{PartitionEdit::Kind::move, tau,
                         static_cast<std::int32_t>(rng.uniform_int(1, merged - 1))};
  }
}

}  // namespace

TEST_SUITE_BEGIN("htcm");

TEST_CASE("window log likelihood trivial cases") {
  SUBCASE("empty window contributes nothing") {
    WindowAggregate w;
    w.width = 5;
    w.out_degree.assign(3, 0);
    w.in_degree.assign(3, 0);
    CHECK(window_log_likelihood(w) == 0.0);
  }
  SUBCASE("single edge in a width-one window") {
    std::vector<TemporalEvent> events{{0, 1, 0}};
    TemporalGraph g(2, 1, events);
    auto windows = aggregate(g, WindowPartition::single_window(1));
    CHECK(window_log_likelihood(windows[0]) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("window log likelihood matches the exact rational oracle") {
  Rng rng(505);
  for (int rep = 0; rep < 30; ++rep) {
    const auto steps = static_cast<std::int32_t>(rng.uniform_int(1, 8));
    auto g = testing::random_graph(3, steps, rng.uniform_int(0, 25), rng);
    WindowPartition p(testing::random_widths(steps, rng));
    auto windows = aggregate(g, p);
    for (std::int32_t tau = 0; tau < p.window_count(); ++tau) {
      const double got = window_log_likelihood(windows[static_cast<std::size_t>(tau)]);
      const double want = testing::exact_window_log_likelihood(g, p, tau);
      CHECK(std::abs(got - want) < 1e-9);
    }
  }
}

TEST_CASE("partition prior examples and normalization") {
  CHECK(partition_prior_bits(2, 5) == doctest::Approx(std::log2(20.0)).epsilon(1e-12));
  CHECK(partition_prior_bits(1, 7) == doctest::Approx(std::log2(7.0)).epsilon(1e-12));
  CHECK_THROWS_AS(partition_prior_bits(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(partition_prior_bits(6, 5), std::invalid_argument);

  // Sum over all compositions of T equals one.
  for (std::int32_t T : {2, 5, 8}) {
    double sum = 0.0;
    for (const auto& widths : testing::all_compositions(T))
      sum += std::exp2(-partition_prior_bits(static_cast<std::int64_t>(widths.size()), T));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("fixed-window prior examples and admissible pair count") {
  CHECK(fixed_window_prior_bits(5) == doctest::Approx(std::log2(10.0)).epsilon(1e-12));
  CHECK(fixed_window_prior_bits(2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fixed_window_prior_bits(1), std::invalid_argument);

  // (delta, alpha) pairs with delta < T, each buildable and admissible.
  for (std::int32_t T : {2, 3, 5, 8}) {
    std::int64_t admissible = 0;
    for (std::int32_t delta = 1; delta < T; ++delta) {
      for (std::int32_t alpha = 0; alpha < delta; ++alpha) {
        WindowPartition p = build_fixed_partition(T, delta, alpha);
        CHECK_NOTHROW(validate_fixed_window_partition(p));
        ++admissible;
      }
    }
    CHECK(admissible == static_cast<std::int64_t>(T) * (T - 1) / 2);
  }

  SUBCASE("unequal interior widths are rejected in fixed mode") {
    CHECK_THROWS_AS(validate_fixed_window_partition(WindowPartition({2, 3, 4, 1})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_fixed_window_partition(WindowPartition({5, 3, 3, 1})),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_fixed_window_partition(WindowPartition({2, 3, 3, 3, 1})));
  }
}

TEST_CASE("activity prior examples and enumeration") {
  CHECK(activity_prior_bits(2, 2) == doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-12));
  CHECK(activity_prior_bits(4, 0) == 0.0);
  CHECK(testing::all_weak_compositions(3, 4).size() == 15);
  CHECK(std::exp2(activity_prior_bits(3, 4) / 2.0) == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("edge count prior examples and normalization") {
  SUBCASE("single window costs nothing") {
    const std::int64_t m[] = {17};
    CHECK(edge_count_prior_bits(m, WindowPartition::single_window(6), 17) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("even split of two edges") {
    const std::int64_t m[] = {1, 1};
    CHECK(edge_count_prior_bits(m, WindowPartition({1, 1}), 2) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("sum mismatch throws") {
    const std::int64_t m[] = {1, 1};
    CHECK_THROWS_AS(edge_count_prior_bits(m, WindowPartition({1, 1}), 3), std::invalid_argument);
  }
  SUBCASE("multinomial sums to one over all splits") {
    const WindowPartition p({2, 1, 3});
    const std::int64_t M = 5;
    double sum = 0.0;
    for (const auto& split : testing::all_weak_compositions(3, M))
      sum += std::exp2(-edge_count_prior_bits(split, p, M));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("description length matches the exact joint oracle") {
  Rng rng(909);
  for (int rep = 0; rep < 15; ++rep) {
    const auto steps = static_cast<std::int32_t>(rng.uniform_int(2, 7));
    auto g = testing::random_graph(3, steps, rng.uniform_int(1, 20), rng);
    WindowPartition p(testing::random_widths(steps, rng));
    const auto report = description_length(g, p);
    const double exact = testing::exact_description_length(g, p);
    CHECK(std::abs(report.total_bits - exact) < 1e-9);

    // Components sum to the total.
    NeumaierSum components;
    for (const auto& w : report.per_window) {
      components.add(w.likelihood_bits);
      components.add(w.activity_prior_bits);
    }
    components.add(report.partition_prior_bits);
    components.add(report.edge_count_prior_bits);
    components.add(report.data_constant_bits);
    CHECK(components.value() == doctest::Approx(report.total_bits).epsilon(1e-12));
  }
}

TEST_CASE("data constant bits are identical across partitions") {
  Rng rng(2112);
  auto g = testing::random_graph(4, 12, 80, rng);
  const auto reference = description_length(g, WindowPartition::single_window(12));
  for (int rep = 0; rep < 10; ++rep) {
    WindowPartition p(testing::random_widths(12, rng));
    const auto report = description_length(g, p);
    CHECK(report.data_constant_bits == doctest::Approx(reference.data_constant_bits).epsilon(1e-12));
  }
}

TEST_CASE("argmin over partitions is unchanged without the data constant") {
  Rng rng(31);
  auto g = testing::random_graph(3, 8, 60, rng);
  const auto compositions = testing::all_compositions(8);
  std::size_t best_abs = 0, best_rel = 0;
  double abs_bits = std::numeric_limits<double>::infinity();
  double rel_bits = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < compositions.size(); ++i) {
    const auto report = description_length(g, WindowPartition(compositions[i]));
    if (report.total_bits < abs_bits) {
      abs_bits = report.total_bits;
      best_abs = i;
    }
    const double relative = report.total_bits - report.data_constant_bits;
    if (relative < rel_bits) {
      rel_bits = relative;
      best_rel = i;
    }
  }
  CHECK(best_abs == best_rel);
}

TEST_CASE("joint probability is a sub-distribution pinned at the MLE") {
  // Sum over all graphs with M edges on a tiny axis and over all partitions:
  // exp2(-DL) uses the MLE activities only, so the sum stays below one and
  // must match the independently enumerated joint terms.
  const std::int32_t N = 2, T = 3;
  const std::int64_t M = 2;

  double dl_sum = 0.0;
  double oracle_sum = 0.0;
  // Enumerate graphs as per-step count matrices.
  const auto step_splits = testing::all_weak_compositions(T, M);
  for (const auto& split : step_splits) {
    std::vector<std::vector<CountMatrix>> step_choices;
    for (std::int32_t t = 0; t < T; ++t)
      step_choices.push_back(testing::all_count_matrices(N, split[static_cast<std::size_t>(t)]));
    std::vector<std::size_t> index(static_cast<std::size_t>(T), 0);
    for (;;) {
      std::vector<TemporalEvent> events;
      for (std::int32_t t = 0; t < T; ++t) {
        const CountMatrix& counts = step_choices[static_cast<std::size_t>(t)][index[static_cast<std::size_t>(t)]];
        for (std::int32_t v = 0; v < N; ++v)
          for (std::int32_t w = 0; w < N; ++w)
            for (std::int64_t k = 0; k < counts(v, w); ++k)
              events.push_back(TemporalEvent{v, w, t});
      }
      TemporalGraph g(N, T, events);
      for (const auto& widths : testing::all_compositions(T)) {
        WindowPartition p(widths);
        dl_sum += std::exp2(-description_length(g, p).total_bits);
        oracle_sum += std::exp2(-testing::exact_description_length(g, p));
      }
      // Advance the mixed-radix index.
      std::int32_t pos = 0;
      while (pos < T) {
        if (++index[static_cast<std::size_t>(pos)] < step_choices[static_cast<std::size_t>(pos)].size()) break;
        index[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == T) break;
    }
  }
  CHECK(dl_sum <= 1.0 + 1e-9);
  CHECK(dl_sum == doctest::Approx(oracle_sum).epsilon(1e-9));
}

TEST_CASE("full generative chain sums to one over parameters and outcomes") {
  // Pr(Delta) Pr(m|Delta) Pr(xi|m) Pr(A|xi) Pr(scatter|A) summed over
  // everything equals one; checked on a tiny instance with T=2, M=2.
  const std::int32_t N = 2, T = 2;
  const std::int64_t M = 2;
  double total = 0.0;
  for (const auto& widths : testing::all_compositions(T)) {
    WindowPartition p(widths);
    const auto z = static_cast<std::int32_t>(widths.size());
    const double prior = std::exp2(-partition_prior_bits(z, T));
    for (const auto& split : testing::all_weak_compositions(z, M)) {
      const double edge_prior = std::exp2(-edge_count_prior_bits(split, p, M));
      double window_product = 1.0;
      for (std::int32_t tau = 0; tau < z; ++tau) {
        const std::int64_t m = split[static_cast<std::size_t>(tau)];
        const std::int32_t width = widths[static_cast<std::size_t>(tau)];
        double window_sum = 0.0;
        for (const auto& xi_out : testing::all_weak_compositions(N, m)) {
          for (const auto& xi_in : testing::all_weak_compositions(N, m)) {
            ActivityVectors act{xi_out, xi_in, m};
            const double act_prior = std::exp2(-activity_prior_bits(N, m));
            for (const auto& counts : testing::all_count_matrices(N, m, &act)) {
              const double likelihood = std::exp2(hcm_log_prob(counts, act));
              // Scatter: multinomial over the width; sums to one per cell, so
              // enumerate scatterings implicitly via the multinomial theorem.
              window_sum += act_prior * likelihood;
            }
          }
        }
        window_product *= window_sum;
      }
      total += prior * edge_prior * window_product;
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("incremental deltas match full recomputation") {
  Rng rng(6060);
  int checked = 0;
  while (checked < 1000) {
    const auto n = static_cast<std::int32_t>(rng.uniform_int(2, 6));
    const auto steps = static_cast<std::int32_t>(rng.uniform_int(4, 32));
    auto g = testing::random_graph(n, steps, rng.uniform_int(0, 400), rng);
    DLEvaluator eval(g);
    WindowPartition p(testing::random_widths(steps, rng));
    for (int e = 0; e < 10 && checked < 1000; ++e, ++checked) {
      const PartitionEdit edit = random_edit(p, rng);
      const double delta = eval.delta_bits(p.widths(), edit);
      const WindowPartition after = apply_edit(p, edit);
      const double full =
          description_length(g, after).total_bits - description_length(g, p).total_bits;
      CHECK(std::abs(delta - full) < 1e-9);
      p = after;  // random walk over partitions
    }
  }
}

TEST_CASE("split then join deltas cancel exactly") {
  Rng rng(404);
  auto g = testing::random_graph(3, 10, 50, rng);
  DLEvaluator eval(g);
  WindowPartition p({4, 6});
  const PartitionEdit split{PartitionEdit::Kind::split, 1, 2};
  const double d1 = eval.delta_bits(p.widths(), split);
  const WindowPartition after = apply_edit(p, split);
  const PartitionEdit join{PartitionEdit::Kind::join, 1, 0};
  const double d2 = eval.delta_bits(after.widths(), join);
  CHECK(std::abs(d1 + d2) < 1e-9);

  SUBCASE("move recreating the boundary is free") {
    const PartitionEdit stay{PartitionEdit::Kind::move, 0, 4};
    CHECK(eval.delta_bits(p.widths(), stay) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("invalid edits throw") {
    CHECK_THROWS_AS(eval.delta_bits(p.widths(), PartitionEdit{PartitionEdit::Kind::split, 0, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval.delta_bits(p.widths(), PartitionEdit{PartitionEdit::Kind::join, 1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(dl_delta(g, p, PartitionEdit{PartitionEdit::Kind::move, 0, 10}),
                    std::invalid_argument);
  }
}

TEST_CASE("noiseless change point beats misaligned equal-size partitions") {
  // Two strongly different halves; the aligned two-window partition must
  // beat every other two-window split.
  std::vector<TemporalEvent> events;
  for (std::int32_t t = 0; t < 4; ++t)
    for (int k = 0; k < 12; ++k) events.push_back(TemporalEvent{0, 1, t});
  for (std::int32_t t = 4; t < 8; ++t)
    for (int k = 0; k < 12; ++k) events.push_back(TemporalEvent{2, 3, t});
  TemporalGraph g(4, 8, events);

  const double aligned = description_length(g, WindowPartition({4, 4})).total_bits;
  for (std::int32_t cut = 1; cut < 8; ++cut) {
    if (cut == 4) continue;
    const double other = description_length(g, WindowPartition({cut, 8 - cut})).total_bits;
    CHECK(aligned < other);
  }
}

TEST_SUITE_END();
