#include "specurve/dataset.hpp"
#include "specurve/errors.hpp"
#include "specurve/spec_space.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace specurve;

namespace {
std::vector<std::string> names(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}
}  // namespace

TEST_CASE("ten controls give 1024 specifications") {
    CHECK(enumerate({"y"}, {"x"}, names("z", 10), OutcomeMode::single_y).size() == 1024);
}

TEST_CASE("empty pool gives the x-only model") {
    const auto s = enumerate({"y"}, {"x"}, {}, OutcomeMode::single_y);
    REQUIRE(s.size() == 1);
    CHECK(s.specs[0].z_subset.empty());
}

TEST_CASE("multi-y 4 x 4 gives 240 specs, matching brute force") {
    const auto s = enumerate(names("y", 4), {"x"}, names("z", 4), OutcomeMode::multi_y);
    CHECK(s.size() == 240);
    std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> seen;
    for (const auto& sp : s.specs) seen.insert({sp.y_subset, sp.z_subset});
    CHECK(seen.size() == 240);
    std::size_t brute = 0;
    for (int ym = 1; ym < 16; ++ym) {
        for (int zm = 0; zm < 16; ++zm) ++brute;
    }
    CHECK(brute == 240);
}

TEST_CASE("ordering: y options lexicographic, z subsets by binary counter") {
    const auto s = enumerate({"a", "b", "c"}, {"x"}, {"p", "q"}, OutcomeMode::multi_y);
    const std::vector<std::vector<std::string>> want_y{{"a"}, {"a", "b"}, {"a", "b", "c"}, {"a", "c"},
                                                      {"b"}, {"b", "c"}, {"c"}};
    CHECK(s.y_options == want_y);
    CHECK(s.specs[0].z_subset.empty());
    CHECK(s.specs[1].z_subset == std::vector<std::string>{"p"});
    CHECK(s.specs[2].z_subset == std::vector<std::string>{"q"});
    CHECK(s.specs[3].z_subset == std::vector<std::string>{"p", "q"});
    CHECK(s.specs[4].y_subset == std::vector<std::string>{"a", "b"});
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.specs[i].index == i);
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(enumerate({"y"}, {"y"}, {}, OutcomeMode::single_y), ConfigError);
    CHECK_THROWS_AS(enumerate({"y"}, {"x"}, {"x"}, OutcomeMode::single_y), ConfigError);
    CHECK_THROWS_AS(enumerate({"y1", "y2"}, {"x"}, {}, OutcomeMode::single_y), ConfigError);
    CHECK_THROWS_AS(enumerate({}, {"x"}, {}, OutcomeMode::single_y), ConfigError);
    CHECK_THROWS_AS(enumerate({"y"}, {}, {}, OutcomeMode::single_y), ConfigError);
}

TEST_CASE("count law across pool and outcome sizes") {
    for (std::size_t d = 0; d <= 12; ++d) {
        const auto z = names("z", d);
        CHECK(enumerate({"y"}, {"x"}, z, OutcomeMode::single_y).size() == (std::size_t{1} << d));
        for (std::size_t dy = 1; dy <= 4; ++dy) {
            if (d > 8) continue;  // keep the multi-y sweep small
            const auto s = enumerate(names("y", dy), {"x"}, z, OutcomeMode::multi_y);
            CHECK(s.size() == ((std::size_t{1} << dy) - 1) * (std::size_t{1} << d));
        }
    }
}

TEST_CASE("composite of identical columns equals the column z-score") {
    const Dataset ds({{"a", {1, 4, 2, 8, 5}}, {"b", {1, 4, 2, 8, 5}}});
    const auto c = compose(ds, {"a", "b"});
    const auto single = compose(ds, {"a"});
    double mean = 0.0;
    for (double v : {1, 4, 2, 8, 5}) mean += v / 5.0;
    double var = 0.0;
    for (double v : {1, 4, 2, 8, 5}) var += (v - mean) * (v - mean) / 5.0;
    const std::vector<double> raw{1, 4, 2, 8, 5};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(c[i] - (raw[i] - mean) / std::sqrt(var)) < 1e-10);
        CHECK(std::abs(c[i] - single[i]) < 1e-10);
    }
}

TEST_CASE("composite handles missing rows and rejects constants") {
    const Dataset ds({{"a", {1, kMissing, 3, 4}}, {"b", {2, 1, kMissing, 0}}, {"k", {1, 1, 1, 1}}});
    const auto c = compose(ds, {"a", "b"});
    CHECK(is_missing(c[1]));
    CHECK(is_missing(c[2]));
    CHECK_FALSE(is_missing(c[0]));
    CHECK_THROWS_AS(compose(ds, {"a", "k"}), SpecRejected);
}

TEST_CASE("subsampling is seeded, uniform in size and canonical in order") {
    const auto full = enumerate(names("y", 3), {"x"}, names("z", 6), OutcomeMode::multi_y);
    const auto a = subsample(full, 4, 10, 99);
    const auto b = subsample(full, 4, 10, 99);
    CHECK(a.size() == 40);
    std::set<std::size_t> ys;
    for (const auto& sp : a.specs) ys.insert(sp.y_option);
    CHECK(ys.size() == 4);
    CHECK(a.specs == b.specs);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto& p = a.specs[i - 1];
        const auto& q = a.specs[i];
        CHECK((p.y_option < q.y_option || (p.y_option == q.y_option && p.z_mask < q.z_mask)));
    }
    const auto c = subsample(full, 4, 10, 100);
    CHECK_FALSE(a.specs == c.specs);
    CHECK_THROWS_AS(subsample(full, 8, 1, 1), ConfigError);
    CHECK_THROWS_AS(subsample(full, 1, 65, 1), ConfigError);

    const auto sampled = enumerate_sampled(names("y", 1), {"x"}, names("z", 40), OutcomeMode::single_y,
                                           Estimator::ols, 1, 500, 7);
    CHECK(sampled.size() == 500);
    std::set<std::uint64_t> masks;
    for (const auto& s : sampled.specs) masks.insert(s.z_mask);
    CHECK(masks.size() == 500);
}

TEST_CASE("oversized spaces must be subsampled") {
    CHECK_THROWS_AS(enumerate({"y"}, {"x"}, names("z", 30), OutcomeMode::single_y), ConfigError);
}

TEST_CASE("spec labels") {
    const auto s = enumerate({"y1", "y2"}, {"x"}, {"z1", "z2"}, OutcomeMode::multi_y);
    CHECK(spec_label(s, s.specs.back()) == "y2 | z1,z2");
    const auto t = enumerate({"y"}, {"x"}, {"z1", "z2"}, OutcomeMode::single_y);
    CHECK(spec_label(t, t.specs[3]) == "z1,z2");
}
