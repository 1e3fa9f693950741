#include <doctest.h>

#include <cmath>
#include <random>

#include "resm/errors.hpp"
#include "resm/retrofit.hpp"
#include "test_support.hpp"

using namespace resm;
using testing_support::rows_of;
using testing_support::space_from;

namespace {

SynonymLexicon lexicon(std::initializer_list<std::pair<const std::string, std::set<std::string>>> e) {
  return SynonymLexicon(SynonymLexicon::Entries(e));
}

RetrofitConfig config(RetrofitVariant v, int iters, unsigned threads = 1) {
  RetrofitConfig c;
  c.variant = v;
  c.iterations = iters;
  c.threads = threads;
  return c;
}

}  // namespace

TEST_CASE("original retrofit, one step by hand") {
  const auto space = space_from({"i", "j", "k"}, {{2, 0}, {0, 2}, {7, 7}});
  const auto out = retrofit_original(space, lexicon({{"i", {"j"}}}), config(RetrofitVariant::original, 1));
  CHECK(out.row(0)[0] == 1.0);
  CHECK(out.row(0)[1] == 1.0);
  CHECK(out.row(1)[1] == 2.0);
  CHECK(out.row(2)[0] == 7.0);
}

TEST_CASE("L2 retrofit, one step by hand") {
  SUBCASE("orthogonal synonym") {
    const auto space = space_from({"i", "j"}, {{1, 0}, {0, 1}});
    const auto out = retrofit_l2(space, lexicon({{"i", {"j"}}}), config(RetrofitVariant::l2, 1));
    CHECK(out.row(0)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out.row(0)[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("synonym with the same direction is a fixed point") {
    const auto space = space_from({"i", "j"}, {{2, 0}, {5, 0}});
    const auto out = retrofit_l2(space, lexicon({{"i", {"j"}}}), config(RetrofitVariant::l2, 10));
    CHECK(std::fabs(out.row(0)[0] - 2.0) <= 1e-12);
    CHECK(std::fabs(out.row(0)[1]) <= 1e-12);
  }
}

TEST_CASE("retrofit matches the loop oracle on a chain") {
  const oracle::Mat rows{{1, 0, 0.5}, {0.2, 1, -1}, {-1, 0.3, 2}, {0.5, 0.5, 0.5}, {3, -2, 1}};
  const auto space = space_from(rows);
  // w0 -> w1 -> w2 -> w3 -> w4, plus a back edge.
  const auto lex = lexicon({{"w0", {"w1"}}, {"w1", {"w0", "w2"}}, {"w2", {"w1", "w3"}},
                            {"w3", {"w2", "w4"}}});
  const std::map<std::size_t, std::vector<std::size_t>> idx{
      {0, {1}}, {1, {0, 2}}, {2, {1, 3}}, {3, {2, 4}}};

  for (bool l2 : {false, true}) {
    CAPTURE(l2);
    const auto expected = oracle::retrofit(rows, idx, 10, l2);
    const auto got = rows_of(retrofit(space, lex, config(l2 ? RetrofitVariant::l2 : RetrofitVariant::original, 10)));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < rows[i].size(); ++c)
        CHECK(std::fabs(got[i][c] - expected[i][c]) <= 1e-10);
    // w4 is not a head.
    CHECK(got[4] == rows[4]);
  }
}

TEST_CASE("retrofit properties on random instances") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Mat rows(30, oracle::Vec(6));
    for (auto& r : rows)
      for (auto& x : r) x = g(rng);
    const auto space = space_from(rows);
    SynonymLexicon::Entries e;
    std::uniform_int_distribution<std::size_t> pick(0, 29);
    for (int h = 0; h < 12; ++h) {
      const auto head = pick(rng);
      for (int s = 0; s < 3; ++s) {
        const auto syn = pick(rng);
        if (syn != head) e["w" + std::to_string(head)].insert("w" + std::to_string(syn));
      }
    }
    const SynonymLexicon lex(e);

    for (auto variant : {RetrofitVariant::original, RetrofitVariant::l2}) {
      const auto serial = retrofit(space, lex, config(variant, 10, 1));
      const auto parallel = retrofit(space, lex, config(variant, 10, 4));
      CHECK(rows_of(serial) == rows_of(parallel));
      for (std::size_t i = 0; i < space.size(); ++i)
        if (lex.synonyms_of(space.token(i)).empty()) CHECK(rows_of(serial)[i] == rows[i]);
    }

    // Single L2 step: norm never grows, angle to the synonym mean never grows.
    const auto step = retrofit_l2(space, lex, config(RetrofitVariant::l2, 1));
    for (const auto& [head, syns] : lex.entries()) {
      const auto i = *space.index_of(head);
      CHECK(l2_norm(step.row(i)) <= l2_norm(space.row(i)) * (1 + 1e-15));
      oracle::Vec mean(space.dim(), 0.0);
      for (const auto& s : syns) {
        const auto j = *space.index_of(s);
        const double n = l2_norm(space.row(j));
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += space.row(j)[c] / n;
      }
      const oracle::Vec before(space.row(i).begin(), space.row(i).end());
      const oracle::Vec after(step.row(i).begin(), step.row(i).end());
      CHECK(oracle::cosine(after, mean) >= oracle::cosine(before, mean) - 1e-12);
    }
  }
}

TEST_CASE("retrofit error paths") {
  const auto space = space_from({"a", "b", "z"}, {{1, 0}, {0, 1}, {0, 0}});
  CHECK_THROWS_AS(retrofit_l2(space, lexicon({{"a", {"z"}}}), config(RetrofitVariant::l2, 1)), NumericError);
  CHECK_THROWS_AS(retrofit_l2(space, lexicon({{"z", {"a"}}}), config(RetrofitVariant::l2, 1)), NumericError);
  CHECK_THROWS_AS(retrofit_original(space, lexicon({{"a", {"q"}}}), config(RetrofitVariant::original, 1)),
                  ContractError);
  CHECK_THROWS_AS(retrofit_original(space, lexicon({{"a", {"b"}}}), config(RetrofitVariant::original, 0)),
                  ContractError);
  // Zero vectors are fine for the original variant.
  CHECK_NOTHROW(retrofit_original(space, lexicon({{"a", {"z"}}}), config(RetrofitVariant::original, 3)));
}
