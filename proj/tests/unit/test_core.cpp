#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/dataset.hpp"
#include "dpforest/core/ensemble.hpp"
#include "dpforest/core/error.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/core/transform.hpp"
#include "dpforest/core/tree.hpp"
#include "helpers.hpp"

using namespace dpforest;

namespace {

Dataset make_dataset(std::vector<std::vector<double>> cols, std::vector<double> y) {
  Dataset d;
  d.x = Matrix(y.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < y.size(); ++i) d.x(i, j) = cols[j][i];
  }
  d.y = std::move(y);
  return d;
}

double min_distance_to_cut(const Tree& t, std::span<const double> x) {
  double best = 1e300;
  for (NodeId b : t.branches()) {
    best = std::min(best, std::abs(x[static_cast<std::size_t>(t.node(b).var)] - t.node(b).cut));
  }
  return best;
}

}  // namespace

TEST_SUITE("standardize") {
  TEST_CASE("hand min-max arithmetic") {
    const Dataset raw = make_dataset({{2, 4, 6}}, {10, 15, 20});
    auto [t, spec] = standardize(raw);
    CHECK(t.x(0, 0) == 0.0);
    CHECK(t.x(1, 0) == 0.5);
    CHECK(t.x(2, 0) == 1.0);
    CHECK(t.y[0] == -0.5);
    CHECK(t.y[1] == 0.0);
    CHECK(t.y[2] == 0.5);
  }

  TEST_CASE("two-row response maps to the interval ends") {
    const Dataset raw = make_dataset({{2, 6}}, {10, 20});
    auto [t, spec] = standardize(raw);
    CHECK(t.y[0] == -0.5);
    CHECK(t.y[1] == 0.5);
  }

  TEST_CASE("data already on the target scales is unchanged") {
    const Dataset raw = make_dataset({{0.0, 0.25, 1.0}, {1.0, 0.0, 0.5}}, {-0.5, 0.1, 0.5});
    auto [t, spec] = standardize(raw);
    CHECK(t.x == raw.x);
    CHECK(t.y == raw.y);
  }

  TEST_CASE("constant predictor is an error naming the column") {
    Dataset raw = make_dataset({{1, 2, 3}, {3, 3, 3}}, {1, 2, 3});
    raw.feature_names = {"a", "flat"};
    try {
      (void)standardize(raw);
      FAIL("expected an error");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("constant predictor") != std::string::npos);
      CHECK(msg.find("flat") != std::string::npos);
    }
  }

  TEST_CASE("constant response is an error") {
    const Dataset raw = make_dataset({{1, 2, 3}}, {4, 4, 4});
    CHECK_THROWS_AS((void)standardize(raw), DataError);
  }

  TEST_CASE("round trip and ranges on random data") {
    RngStream rng(11, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 2 + rng.uniform_index(50);
      const std::size_t p = 1 + rng.uniform_index(6);
      Dataset raw;
      raw.x = Matrix(n, p);
      raw.y.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        raw.y[i] = rng.normal(100.0, 30.0);
        for (std::size_t j = 0; j < p; ++j) raw.x(i, j) = rng.normal(-5.0, 1e3);
      }
      auto [t, spec] = standardize(raw);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(t.y[i] >= -0.5);
        CHECK(t.y[i] <= 0.5);
        CHECK(std::abs(spec.inverse_y(t.y[i]) - raw.y[i]) <= 1e-12 * std::abs(raw.y[i]) + 1e-300);
        for (std::size_t j = 0; j < p; ++j) {
          CHECK(t.x(i, j) >= 0.0);
          CHECK(t.x(i, j) <= 1.0);
          CHECK(std::abs(spec.inverse_x(j, t.x(i, j)) - raw.x(i, j)) <= 1e-12 * std::abs(raw.x(i, j)));
        }
      }
    }
  }
}

TEST_SUITE("dataset") {
  TEST_CASE("csv parsing picks the response column") {
    std::istringstream in("a,y,b\n1,2,3\n4,5,6\n");
    const Dataset d = read_csv(in, "y");
    CHECK(d.num_rows() == 2);
    CHECK(d.num_features() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(d.y == std::vector<double>{2, 5});
    CHECK(d.x(1, 1) == 6.0);
  }

  TEST_CASE("non-numeric cell reports row and column") {
    std::istringstream in("a,y\n1,2\n3,oops\n");
    try {
      (void)read_csv(in, "y");
      FAIL("expected an error");
    } catch (const DataError& e) {
      CHECK(e.row() == 3);
      CHECK(e.column() == 2);
    }
  }

  TEST_CASE("missing cell is an error") {
    std::istringstream in("a,y\n1,2\n,3\n");
    CHECK_THROWS_AS((void)read_csv(in, "y"), DataError);
  }

  TEST_CASE("missing response column is a config error naming it") {
    std::istringstream in("a,b\n1,2\n3,4\n");
    try {
      (void)read_csv(in, "target");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("target") != std::string::npos);
    }
  }

  TEST_CASE("csv round trip is exact") {
    RngStream rng(3, 1);
    Dataset d;
    d.x = testutil::uniform_matrix(7, 3, rng);
    for (int i = 0; i < 7; ++i) d.y.push_back(rng.normal());
    d.feature_names = {"u", "v", "w"};
    std::stringstream buf;
    write_csv(buf, d, "resp");
    const Dataset back = read_csv(buf, "resp");
    CHECK(back.x == d.x);
    CHECK(back.y == d.y);
    CHECK(back.feature_names == d.feature_names);
  }

  TEST_CASE("predictor csv matches columns by name") {
    std::istringstream in("b,extra,a\n1,9,2\n3,9,4\n");
    const Matrix m = read_predictors_csv(in, {"a", "b"});
    CHECK(m(0, 0) == 2.0);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 0) == 4.0);
  }

  TEST_CASE("validation rejects tiny data") {
    Dataset d = make_dataset({{1}}, {1});
    CHECK_THROWS_AS(d.validate(), DataError);
  }
}

TEST_SUITE("tree") {
  TEST_CASE("grow and prune keep a rooted binary tree") {
    Tree t;
    CHECK(t.num_leaves() == 1);
    t.grow(Tree::kRoot, 0, 0.5);
    const NodeId l = t.node(Tree::kRoot).left;
    t.grow(l, 1, 0.25);
    CHECK(t.num_leaves() == 3);
    CHECK(t.num_branches() == 2);
    CHECK(t.depth(t.node(l).left) == 2);
    CHECK(t.prunable() == std::vector<NodeId>{l});
    const Interval iv = t.interval(t.node(l).right, 0);
    CHECK(iv.lo == 0.0);
    CHECK(iv.hi == 0.5);
    const Interval iv1 = t.interval(t.node(l).right, 1);
    CHECK(iv1.lo == 0.25);
    CHECK(iv1.hi == 1.0);
    t.prune(l);
    CHECK(t.num_leaves() == 2);
    for (NodeId id : t.leaves()) CHECK(t.node(id).is_leaf());
  }

  TEST_CASE("prior trees have cuts strictly inside their node sides") {
    RngStream rng(5, 0);
    for (int rep = 0; rep < 200; ++rep) {
      const Tree t = testutil::random_tree(3, rng);
      CHECK(t.num_leaves() == t.num_branches() + 1);
      for (NodeId b : t.branches()) {
        const Node& n = t.node(b);
        const Interval iv = t.interval(b, n.var);
        CHECK(n.cut > iv.lo);
        CHECK(n.cut < iv.hi);
        CHECK(t.node(n.left).parent == b);
        CHECK(t.node(n.right).parent == b);
      }
    }
  }

  TEST_CASE("equality ignores arena layout") {
    Tree a;
    a.grow(Tree::kRoot, 0, 0.5);
    a.grow(a.node(Tree::kRoot).left, 1, 0.3);
    a.prune(a.node(Tree::kRoot).left);
    a.grow(a.node(Tree::kRoot).right, 2, 0.7);
    Tree b;
    b.grow(Tree::kRoot, 0, 0.5);
    b.grow(b.node(Tree::kRoot).right, 2, 0.7);
    CHECK(a == b);
    b.set_mu(b.leaves()[0], 1.0);
    CHECK_FALSE(a == b);
  }
}

TEST_SUITE("leaf weights") {
  TEST_CASE("single leaf tree weighs one in both modes") {
    Tree t;
    const std::vector<double> x{0.3, 0.9};
    CHECK(leaf_weights(t, x, GateMode::Hard) == std::vector<double>{1.0});
    CHECK(leaf_weights(t, x, GateMode::Soft) == std::vector<double>{1.0});
  }

  TEST_CASE("hard root split routes left when x <= cut") {
    Tree t;
    t.grow(Tree::kRoot, 0, 0.5);
    CHECK(leaf_weights(t, std::vector<double>{0.3}, GateMode::Hard) == std::vector<double>{1.0, 0.0});
    CHECK(leaf_weights(t, std::vector<double>{0.5}, GateMode::Hard) == std::vector<double>{1.0, 0.0});
    CHECK(leaf_weights(t, std::vector<double>{0.7}, GateMode::Hard) == std::vector<double>{0.0, 1.0});
  }

  TEST_CASE("out-of-range points are routed, not clamped") {
    Tree t;
    t.grow(Tree::kRoot, 0, 0.5);
    t.set_tau(0.1);
    CHECK(leaf_weights(t, std::vector<double>{-3.0}, GateMode::Hard) == std::vector<double>{1.0, 0.0});
    const auto w = leaf_weights(t, std::vector<double>{1.2}, GateMode::Soft);
    CHECK(w[1] == doctest::Approx(logistic(0.7 / 0.1)));
  }

  TEST_CASE("soft gates with tiny bandwidth approach hard routing") {
    RngStream rng(17, 0);
    double worst = 0.0;
    int compared = 0;
    for (int rep = 0; rep < 100; ++rep) {
      Tree t = testutil::random_tree(3, rng);
      t.set_tau(1e-6);
      const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
      if (min_distance_to_cut(t, x) < 1e-4) continue;
      const auto h = leaf_weights(t, x, GateMode::Hard);
      const auto s = leaf_weights(t, x, GateMode::Soft);
      for (std::size_t l = 0; l < h.size(); ++l) worst = std::max(worst, std::abs(h[l] - s[l]));
      ++compared;
    }
    CHECK(compared > 80);
    CHECK(worst < 1e-3);
  }

  TEST_CASE("weights sum to one: exactly when hard, to 1e-12 when soft") {
    RngStream rng(19, 0);
    for (int rep = 0; rep < 300; ++rep) {
      Tree t = testutil::random_tree(4, rng, 0.95, 0.5);
      t.set_tau(std::exp(rng.normal(-2.0, 1.0)));
      std::vector<double> x(4);
      for (double& v : x) v = rng.uniform(-0.2, 1.2);
      double hard = 0.0, soft = 0.0;
      for (double w : leaf_weights(t, x, GateMode::Hard)) hard += w;
      for (double w : leaf_weights(t, x, GateMode::Soft)) {
        CHECK(w >= 0.0);
        soft += w;
      }
      CHECK(hard == 1.0);
      CHECK(std::abs(soft - 1.0) < 1e-12);
    }
  }
}

TEST_SUITE("ensemble") {
  ChainState two_leaf_state(double a, double b) {
    ChainState s;
    s.trees.resize(2);
    s.trees[0].set_mu(Tree::kRoot, a);
    s.trees[1].set_mu(Tree::kRoot, b);
    s.z = {0, 0};
    s.log_s = {{0.0}};
    s.log_pi = {0.0};
    return s;
  }

  TEST_CASE("zero leaves predict zero") {
    const ChainState s = two_leaf_state(0.0, 0.0);
    CHECK(ensemble_predict(s, std::vector<double>{0.4}, GateMode::Hard) == 0.0);
  }

  TEST_CASE("hand sum of two single-leaf trees") {
    const ChainState s = two_leaf_state(0.1, -0.3);
    CHECK(ensemble_predict(s, std::vector<double>{0.4}, GateMode::Hard) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(ensemble_predict(s, std::vector<double>{0.4}, GateMode::Soft) == doctest::Approx(-0.2).epsilon(1e-15));
  }

  TEST_CASE("prediction is the weight-value dot product and linear in leaf values") {
    RngStream rng(23, 0);
    for (int rep = 0; rep < 50; ++rep) {
      ChainState s;
      for (int t = 0; t < 5; ++t) {
        s.trees.push_back(testutil::random_tree(3, rng));
        s.trees.back().set_tau(0.05 + rng.uniform() * 0.2);
      }
      s.z.assign(5, 0);
      s.log_s = {testutil::log_uniform(3)};
      s.log_pi = {0.0};
      const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
      for (GateMode mode : {GateMode::Hard, GateMode::Soft}) {
        double dot = 0.0;
        for (const Tree& t : s.trees) {
          const auto w = leaf_weights(t, x, mode);
          const auto leaves = t.leaves();
          for (std::size_t l = 0; l < leaves.size(); ++l) dot += w[l] * t.node(leaves[l]).mu;
        }
        const double pred = ensemble_predict(s, x, mode);
        CHECK(pred == doctest::Approx(dot).epsilon(1e-12));
        ChainState doubled = s;
        for (Tree& t : doubled.trees) {
          for (NodeId leaf : t.leaves()) t.set_mu(leaf, 2.0 * t.node(leaf).mu);
        }
        CHECK(ensemble_predict(doubled, x, mode) == doctest::Approx(2.0 * pred).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("matrix fit agrees with pointwise prediction") {
    RngStream rng(29, 0);
    ChainState s;
    for (int t = 0; t < 4; ++t) s.trees.push_back(testutil::random_tree(2, rng));
    s.z.assign(4, 0);
    s.log_s = {testutil::log_uniform(2)};
    s.log_pi = {0.0};
    const Matrix x = testutil::uniform_matrix(30, 2, rng);
    for (GateMode mode : {GateMode::Hard, GateMode::Soft}) {
      const auto fit = ensemble_fit(s, x, mode);
      for (std::size_t i = 0; i < 30; ++i) {
        CHECK(fit[i] == doctest::Approx(ensemble_predict(s, x.row(i), mode)).epsilon(1e-13));
      }
    }
  }
}

TEST_SUITE("rng") {
  TEST_CASE("identical (seed, stream) gives identical sequences") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(42, 7), d(42, 7);
    for (int i = 0; i < 200; ++i) {
      CHECK(c.normal() == d.normal());
      CHECK(c.log_gamma_variate(0.3) == d.log_gamma_variate(0.3));
    }
  }

  TEST_CASE("streams and children are distinct") {
    RngStream a(42, 0), b(42, 1), c(43, 0);
    const auto va = a.next_u64();
    CHECK(va != b.next_u64());
    CHECK(va != c.next_u64());
    RngStream p(1, 0);
    RngStream k1 = p.child(1), k2 = p.child(2), k1b = p.child(1);
    const auto x1 = k1.next_u64();
    CHECK(x1 != k2.next_u64());
    CHECK(x1 == k1b.next_u64());
  }

  TEST_CASE("pinned outputs") {
    // std::mt19937_64 and std::seed_seq are fully specified by the standard
    // and the variates are computed in-project, so these never change.
    RngStream a(1, 0);
    CHECK(a.next_u64() == 7712288819789024404ull);
    CHECK(a.next_u64() == 6069372287434807842ull);
    CHECK(a.next_u64() == 2874520805244216285ull);
    RngStream b(2024, 5);
    CHECK(b.uniform() == 0.058578181788769002);
    CHECK(b.normal() == 0.78441294218891211);
  }

  TEST_CASE("uniform is open and moments are right") {
    RngStream rng(8, 0);
    std::vector<double> u, z, g, g_small;
    for (int i = 0; i < 100000; ++i) {
      const double v = rng.uniform();
      CHECK((v > 0.0 && v < 1.0));
      u.push_back(v);
      z.push_back(rng.normal());
      g.push_back(rng.gamma(2.5));
      g_small.push_back(std::exp(rng.log_gamma_variate(0.2)));
    }
    const auto mu = testutil::mean_se(u);
    CHECK(std::abs(mu.mean - 0.5) < 3 * mu.se);
    const auto mz = testutil::mean_se(z);
    CHECK(std::abs(mz.mean) < 3 * mz.se);
    const auto mg = testutil::mean_se(g);
    CHECK(std::abs(mg.mean - 2.5) < 3 * mg.se);
    const auto ms = testutil::mean_se(g_small);
    CHECK(std::abs(ms.mean - 0.2) < 3 * ms.se);
    double var = 0.0;
    for (double v : z) var += v * v;
    CHECK(var / 100000.0 == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("uniform_index and categorical_log frequencies") {
    RngStream rng(9, 0);
    std::vector<int> hits(3, 0);
    std::vector<double> logw{std::log(0.2), -INFINITY, std::log(0.8)};
    for (int i = 0; i < 50000; ++i) ++hits[rng.categorical_log(logw)];
    CHECK(hits[1] == 0);
    CHECK(hits[0] / 50000.0 == doctest::Approx(0.2).epsilon(0.05));
    std::vector<int> idx(7, 0);
    for (int i = 0; i < 70000; ++i) ++idx[rng.uniform_index(7)];
    for (int c : idx) CHECK(c == doctest::Approx(10000).epsilon(0.05));
    std::vector<double> none{-INFINITY, -INFINITY};
    CHECK_THROWS(rng.categorical_log(none));
  }

  TEST_CASE("log_dirichlet normalizes and honors zero parameters") {
    RngStream rng(10, 0);
    const std::vector<double> params{0.01, 0.0, 2.0, 0.5};
    for (int i = 0; i < 1000; ++i) {
      const auto ls = log_dirichlet(params, rng);
      CHECK(std::isinf(ls[1]));
      double s = 0.0;
      for (double v : ls) s += std::exp(v);
      CHECK(std::abs(s - 1.0) < 1e-10);
    }
  }
}
