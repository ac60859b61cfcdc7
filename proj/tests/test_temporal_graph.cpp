#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "netspect/temporal_graph.hpp"
#include "netspect/rng.hpp"
#include "test_support.hpp"

using namespace netspect;

TEST_SUITE_BEGIN("temporal_graph");

TEST_CASE("ingest maps labels and shifts timestamps") {
  std::istringstream in("a,b,0\nb,a,1\n");
  auto result = ingest_csv(in);
  CHECK(result.graph.num_nodes() == 2);
  CHECK(result.graph.num_steps() == 2);
  CHECK(result.graph.num_events() == 2);
  CHECK(result.node_labels == std::vector<std::string>{"a", "b"});
  CHECK(result.time_origin == 0);
}

TEST_CASE("ingest shifts and keeps multi-edges") {
  std::istringstream in("a,b,5\na,b,5\n");
  auto result = ingest_csv(in);
  CHECK(result.graph.num_nodes() == 2);
  CHECK(result.graph.num_steps() == 1);
  CHECK(result.graph.num_events() == 2);
  CHECK(result.time_origin == 5);
  auto windows = aggregate(result.graph, WindowPartition::single_window(1));
  REQUIRE(windows.size() == 1);
  REQUIRE(windows[0].cells.size() == 1);
  CHECK(windows[0].cells[0] == CellCount{0, 1, 2});
}

TEST_CASE("ingest handles header flag, iso dates and gaps") {
  std::istringstream in("src,dst,date\nx,y,2001-01-01\ny,z,2001-01-08\n");
  CsvSchema schema;
  schema.has_header = true;
  schema.time_format = TimeFormat::iso_date;
  auto result = ingest_csv(in, schema);
  CHECK(result.graph.num_steps() == 8);  // gap days retained
  CHECK(result.graph.num_nodes() == 3);
  CHECK(result.time_origin == parse_iso_date("2001-01-01"));
}

TEST_CASE("ingest rejects malformed input with line numbers") {
  std::istringstream two_fields("a,b,1\na,b\n");
  CHECK_THROWS_WITH_AS(ingest_csv(two_fields), doctest::Contains("line 2"), ParseError);

  std::istringstream bad_time("a,b,xyz\n");
  CHECK_THROWS_AS(ingest_csv(bad_time), ParseError);

  std::istringstream empty("");
  CHECK_THROWS_AS(ingest_csv(empty), ParseError);

  std::istringstream four_fields("a,b,1,9\n");
  CHECK_THROWS_WITH_AS(ingest_csv(four_fields), doctest::Contains("line 1"), ParseError);
}

TEST_CASE("edge csv round-trips through ingest") {
  Rng rng(99);
  auto g = testing::random_graph(5, 12, 60, rng);
  std::ostringstream out;
  write_edge_csv(out, g);
  std::istringstream in(out.str());
  auto back = ingest_csv(in);
  // Same aggregates after relabeling: compare per-step event multiset sizes.
  CHECK(back.graph.num_events() == g.num_events());
  CHECK(back.graph.num_steps() == g.num_steps());
}

TEST_CASE("rebin floors steps and preserves events") {
  std::vector<TemporalEvent> events{{0, 1, 0}, {1, 0, 13}};
  TemporalGraph g(2, 14, events);
  auto weekly = rebin(g, 7);
  CHECK(weekly.num_steps() == 2);
  CHECK(weekly.num_events() == 2);
  CHECK(weekly.events()[0].step == 0);
  CHECK(weekly.events()[1].step == 1);

  SUBCASE("resolution one is the identity") {
    auto same = rebin(g, 1);
    CHECK(same.events() == g.events());
    CHECK(same.num_steps() == g.num_steps());
  }
  SUBCASE("invalid resolution") { CHECK_THROWS_AS(rebin(g, 0), std::invalid_argument); }
}

TEST_CASE("slice keeps the half-open range and node identity") {
  std::vector<TemporalEvent> events{{0, 1, 2}, {1, 2, 5}};
  TemporalGraph g(3, 6, events);

  SUBCASE("full slice is the identity") {
    auto whole = slice(g, 0, g.num_steps());
    CHECK(whole.events() == g.events());
  }
  SUBCASE("partial slice shifts times") {
    auto part = slice(g, 2, 4);
    CHECK(part.num_events() == 1);
    CHECK(part.events()[0] == TemporalEvent{0, 1, 0});
    CHECK(part.num_nodes() == 3);
    CHECK(part.num_steps() == 2);
  }
  SUBCASE("empty or inverted ranges are rejected") {
    CHECK_THROWS_AS(slice(g, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(slice(g, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(slice(g, 0, 7), std::invalid_argument);
  }
  SUBCASE("rolling slice count arithmetic") {
    Rng rng(5);
    auto big = testing::random_graph(3, 150, 100, rng);
    int count = 0;
    for (std::int32_t s = 0; s + 26 <= big.num_steps(); s += 1) {
      slice(big, s, s + 26);
      ++count;
    }
    CHECK(count == 125);
  }
}

TEST_CASE("aggregate splits counts, degrees and the data term") {
  SUBCASE("single window holds everything") {
    Rng rng(1);
    auto g = testing::random_graph(4, 9, 40, rng);
    auto windows = aggregate(g, WindowPartition::single_window(9));
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].edge_count == 40);
    CHECK(windows[0].width == 9);
  }
  SUBCASE("two singleton windows") {
    std::vector<TemporalEvent> events{{0, 1, 0}, {0, 1, 1}};
    TemporalGraph g(2, 2, events);
    auto windows = aggregate(g, WindowPartition({1, 1}));
    REQUIRE(windows.size() == 2);
    for (const auto& w : windows) {
      CHECK(w.edge_count == 1);
      REQUIRE(w.cells.size() == 1);
      CHECK(w.cells[0] == CellCount{0, 1, 1});
    }
  }
  SUBCASE("mismatched partition is rejected") {
    std::vector<TemporalEvent> events{{0, 1, 0}};
    TemporalGraph g(2, 3, events);
    CHECK_THROWS_AS(aggregate(g, WindowPartition({1, 1})), std::invalid_argument);
  }
}

TEST_CASE("aggregate of a partition equals aggregates of its slices") {
  Rng rng(7);
  auto g = testing::random_graph(5, 20, 150, rng);
  const WindowPartition p({8, 12});
  auto joint = aggregate(g, p);

  auto left = aggregate(slice(g, 0, 8), WindowPartition::single_window(8));
  auto right = aggregate(slice(g, 8, 20), WindowPartition::single_window(12));

  CHECK(joint[0].cells == left[0].cells);
  CHECK(joint[1].cells == right[0].cells);
  CHECK(joint[0].out_degree == left[0].out_degree);
  CHECK(joint[1].in_degree == right[0].in_degree);
  CHECK(joint[0].log_data_term_bits == doctest::Approx(left[0].log_data_term_bits).epsilon(1e-12));
}

TEST_CASE("aggregate invariants on random graphs") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const auto n = static_cast<std::int32_t>(rng.uniform_int(2, 6));
    const auto steps = static_cast<std::int32_t>(rng.uniform_int(2, 24));
    const auto m = rng.uniform_int(0, 200);
    auto g = testing::random_graph(n, steps, m, rng);
    WindowPartition p(testing::random_widths(steps, rng));

    auto windows = aggregate(g, p);
    std::int64_t total = 0;
    for (const auto& w : windows) {
      total += w.edge_count;
      std::int64_t out_sum = 0, in_sum = 0, cell_sum = 0;
      for (auto d : w.out_degree) out_sum += d;
      for (auto d : w.in_degree) in_sum += d;
      for (const auto& c : w.cells) cell_sum += c.count;
      CHECK(out_sum == w.edge_count);
      CHECK(in_sum == w.edge_count);
      CHECK(cell_sum == w.edge_count);
    }
    CHECK(total == g.num_events());
  }
}

TEST_CASE("aggregation is independent of event ordering") {
  std::vector<TemporalEvent> events{{2, 0, 3}, {0, 1, 0}, {1, 2, 3}, {0, 1, 0}, {2, 2, 1}};
  TemporalGraph a(3, 4, events);
  std::reverse(events.begin(), events.end());
  TemporalGraph b(3, 4, events);
  CHECK(a.events() == b.events());
  auto wa = aggregate(a, WindowPartition({2, 2}));
  auto wb = aggregate(b, WindowPartition({2, 2}));
  CHECK(wa[0].cells == wb[0].cells);
  CHECK(wa[1].cells == wb[1].cells);
}

TEST_CASE("rebin then aggregate commutes with widened windows") {
  Rng rng(11);
  auto g = testing::random_graph(4, 24, 120, rng);
  const std::int32_t resolution = 4;
  auto coarse = rebin(g, resolution);

  WindowPartition coarse_p({2, 3, 1});  // widths in rebinned steps
  std::vector<std::int32_t> fine_widths;
  for (auto w : coarse_p.widths()) fine_widths.push_back(w * resolution);

  auto coarse_windows = aggregate(coarse, coarse_p);
  auto fine_windows = aggregate(g, WindowPartition(fine_widths));
  REQUIRE(coarse_windows.size() == fine_windows.size());
  for (std::size_t i = 0; i < coarse_windows.size(); ++i) {
    CHECK(coarse_windows[i].edge_count == fine_windows[i].edge_count);
    CHECK(coarse_windows[i].cells == fine_windows[i].cells);
  }
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(WindowPartition(std::vector<std::int32_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(WindowPartition({3, 0}), std::invalid_argument);
  WindowPartition p({2, 5, 1});
  CHECK(p.total() == 8);
  CHECK(p.window_count() == 3);
  CHECK(p.boundaries() == std::vector<std::int32_t>{2, 7, 8});
  CHECK(WindowPartition::singletons(4).window_count() == 4);
}

TEST_SUITE_END();
