#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dqnnfin/finance.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace dqnnfin;
using finance::BsParams;

namespace {

double round_to(double v, int decimals) {
    const double s = std::pow(10.0, decimals);
    return std::round(v * s) / s;
}

std::filesystem::path temp_file(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(BlackScholes, ReferenceTrainingColumns) {
    const BsParams p{};
    for (std::size_t i = 0; i < reference::kSpots.size(); ++i) {
        const auto r = finance::bs_call_eval(reference::kSpots[i], p);
        EXPECT_DOUBLE_EQ(round_to(r.price, 3), reference::kPrice[i]) << "spot " << reference::kSpots[i];
        EXPECT_DOUBLE_EQ(round_to(r.delta, 3), reference::kDelta[i]) << "spot " << reference::kSpots[i];
        EXPECT_DOUBLE_EQ(round_to(r.gamma, 4), reference::kGamma[i]) << "spot " << reference::kSpots[i];
    }
}

TEST(BlackScholes, CdfMatchesQuadrature) {
    for (const double x : {-3.0, -1.2, -0.1, 0.0, 0.4, 2.5})
        EXPECT_NEAR(finance::normal_cdf(x), oracles::std_normal_cdf_quadrature(x), 1e-12);
}

TEST(BlackScholes, GreeksMatchFiniteDifferences) {
    const BsParams p{100.0, 0.02, 0.5, 0.2};
    const auto price = [&](double s) { return finance::bs_call_eval(s, p).price; };
    for (const double s : {80.0, 95.0, 100.0, 120.0}) {
        const auto r = finance::bs_call_eval(s, p);
        EXPECT_NEAR(r.delta, oracles::central_diff(price, s, 1e-3), 1e-7);
        EXPECT_NEAR(r.gamma, oracles::second_diff(price, s, 1e-2), 1e-6);
    }
}

TEST(BlackScholes, SmallVolTendsToIntrinsic) {
    const BsParams p{100.0, 0.0, 0.25, 1e-6};
    EXPECT_NEAR(finance::bs_call_eval(110.0, p).price, 10.0, 1e-9);
    EXPECT_NEAR(finance::bs_call_eval(90.0, p).price, 0.0, 1e-9);
}

TEST(BlackScholes, ConvexDecreasingInStrike) {
    const double s = 100.0;
    auto at = [&](double k) { return finance::bs_call_eval(s, {k, 0.0, 0.25, 0.15}).price; };
    for (double k = 85.0; k < 115.0; k += 2.5) {
        EXPECT_GT(at(k), at(k + 2.5));
        EXPECT_GE(at(k) - 2 * at(k + 2.5) + at(k + 5.0), 0.0);
    }
}

TEST(BlackScholes, RejectsBadInputs) {
    EXPECT_THROW(finance::bs_call_eval(0.0, {}), std::invalid_argument);
    EXPECT_THROW(finance::bs_call_eval(100.0, {100.0, 0.0, 0.25, 0.0}), std::invalid_argument);
    EXPECT_THROW(finance::bs_call_eval(100.0, {100.0, 0.0, -1.0, 0.15}), std::invalid_argument);
}

TEST(VolData, BundledSmile) {
    const auto t = finance::bundled_vol_smile();
    ASSERT_EQ(t.size(), 7u);
    EXPECT_DOUBLE_EQ(t[2].strike_pct, finance::kBundledForwardPct);
    EXPECT_DOUBLE_EQ(t[2].vol_bps, 59.3);
    EXPECT_DOUBLE_EQ(t.back().vol_bps, 140.5);
}

TEST(VolData, PairsDecodeBackToTrainingVols) {
    const auto t = finance::bundled_vol_smile();
    const auto pairs = finance::build_vol_pairs(t, 0.56, 0.5, 0.5);
    ASSERT_EQ(pairs.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x11 = std::norm(pairs[i].target(0));
        const double vol = encode::decode_value(x11, {t[i].strike_pct, 0.5});
        EXPECT_NEAR(finance::pct_to_bps(vol), t[i].vol_bps, 1e-8);
        EXPECT_NEAR(pairs[i].input.norm(), 1.0, 1e-15);
    }
}

TEST(GreekPairs, ValidStatesWithinBound) {
    const auto points = finance::bs_greek_points({93, 95, 97, 100, 103, 105, 107}, {});
    const auto res = finance::build_greek_pairs(points, {}, 2.0, 2.0, true);
    EXPECT_TRUE(res.warnings.empty());
    ASSERT_EQ(res.pairs.size(), 7u);
    for (const auto& p : res.pairs) {
        for (const auto* m : {&p.d_in_1, &p.d_out_1, &p.d_in_2, &p.d_out_2})
            EXPECT_TRUE(qmath::check_density(*m).ok()) << "spot " << p.x;
        for (const double r : {p.r_in_1, p.r_out_1, p.r_in_2, p.r_out_2}) EXPECT_LE(std::abs(r), 0.5);
    }
    EXPECT_NEAR(res.pairs[3].r_out_1, 0.0116, 1e-4);
}

TEST(GreekPairs, InvalidPointNamesSpot) {
    std::vector<finance::GreekPoint> points{{100.0, 3.0, 400.0, 0.05}};
    try {
        finance::build_greek_pairs(points, {}, 2.0, 2.0);
        FAIL() << "expected domain_error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("spot 100"), std::string::npos) << e.what();
    }
}

TEST(GreekPairs, StrictBoundsTurnWarningsIntoErrors) {
    // negative delta gives r < 0: valid state, outside [0, 1/2]
    std::vector<finance::GreekPoint> points{{100.0, 3.0, -0.5, 0.05}};
    const auto lenient = finance::build_greek_pairs(points, {}, 2.0, 2.0);
    EXPECT_FALSE(lenient.warnings.empty());
    EXPECT_THROW(finance::build_greek_pairs(points, {}, 2.0, 2.0, true), std::domain_error);
}

TEST(Csv, VolRoundTrip) {
    const auto path = temp_file("dqnnfin_vol_test.csv");
    const auto t = finance::bundled_vol_smile();
    finance::write_vol_csv(t, path);
    const auto back = finance::read_vol_csv(path);
    std::filesystem::remove(path);
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back[i].strike_pct, t[i].strike_pct);
        EXPECT_EQ(back[i].vol_bps, t[i].vol_bps);
    }
}

TEST(Csv, GreekRoundTripIsExact) {
    const auto path = temp_file("dqnnfin_greek_test.csv");
    const auto pts = finance::bs_greek_points({93, 100, 107}, {});
    finance::write_greek_csv(pts, path);
    const auto back = finance::read_greek_csv(path);
    std::filesystem::remove(path);
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(back[i].price, pts[i].price);
        EXPECT_EQ(back[i].gamma, pts[i].gamma);
    }
}

TEST(Csv, RejectsWrongHeader) {
    const auto path = temp_file("dqnnfin_bad_header.csv");
    {
        std::ofstream out(path);
        out << "strike,vol\n0.5,60\n";
    }
    EXPECT_THROW(finance::read_vol_csv(path), std::runtime_error);
    std::filesystem::remove(path);
}
