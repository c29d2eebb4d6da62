#include "doctest.h"

#include <cmath>

#include "deepregex/baselines.hpp"

using namespace deepregex;

namespace {

CorpusExample ex(std::string regex, std::string text) { return {std::move(regex), std::move(text), std::nullopt}; }

}  // namespace

TEST_CASE("bow_embed counts lowercased tokens") {
  Vocab v({"a", "b"});
  int a = v.id("a");
  int b = v.id("b");
  CHECK(bow_embed("a a b", v) == BowVector{{a, 2}, {b, 1}});
  CHECK(bow_embed("A a", v) == BowVector{{a, 2}});
  CHECK(bow_embed("a zzz qqq", v) == BowVector{{a, 1}, {Vocab::kUnk, 2}});
  auto x = bow_embed("a a b", v);
  CHECK(bow_dot(x, x) == 5.0);
}

TEST_CASE("cosine similarity") {
  BowVector q{{4, 1}};
  BowVector first{{4, 1}, {5, 1}};
  BowVector second{{5, 1}};
  CHECK(cosine_similarity(q, first) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(cosine_similarity(q, second) == 0.0);
  CHECK(cosine_similarity(q, BowVector{}) == 0.0);
  BowVector scaled{{4, 3}, {5, 3}};
  CHECK(cosine_similarity(q, scaled) == doctest::Approx(cosine_similarity(q, first)));
  CHECK(cosine_similarity(first, first) == doctest::Approx(1.0));
}

TEST_CASE("nearest neighbour prediction") {
  BowNearestNeighbor nn({ex("r0", "a b"), ex("r1", "b"), ex("r2", "c d"), ex("r3", "d c")});
  CHECK(nn.predict("a") == "r0");
  CHECK(nn.predict("c d") == "r2");  // r3 ties, lower index wins
  CHECK(nn.predict("D C") == "r2");
  CHECK(nn.predict("") == "r0");
  CHECK(nn.predict("never seen") == "r0");
  CHECK(nn.predict("b") == "r1");
  CHECK_THROWS_AS(BowNearestNeighbor(Corpus{}), std::invalid_argument);
}

TEST_CASE("predictions are verbatim training regexes") {
  Corpus train = generate_corpus([] {
    GeneratorConfig c;
    c.target_size = 300;
    c.seed = 5;
    return c;
  }());
  Corpus queries = generate_corpus([] {
    GeneratorConfig c;
    c.target_size = 100;
    c.seed = 6;
    return c;
  }());
  BowNearestNeighbor nn(train);
  BowNearestNeighbor again(train);
  for (const auto& q : queries) {
    std::size_t k = nn.nearest(q.synthetic);
    CHECK(nn.predict(q.synthetic) == train[k].regex);
    CHECK(again.nearest(q.synthetic) == k);
    double best = cosine_similarity(bow_embed(q.synthetic, nn.vocab()), bow_embed(train[k].synthetic, nn.vocab()));
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(cosine_similarity(bow_embed(q.synthetic, nn.vocab()), bow_embed(train[j].synthetic, nn.vocab())) < best);
    }
  }
  for (const auto& t : train) CHECK(nn.predict(t.synthetic) == train[nn.nearest(t.synthetic)].regex);
}
