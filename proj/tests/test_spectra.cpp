#include "twomode_jc/spectra.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace twomode_jc;

namespace {

ModelParams params(cplx g, cplx f) {
    ModelParams p;
    p.g = g;
    p.f = f;
    return p;
}

}  // namespace

TEST(Radicals, StructuralIdentities) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 10000; ++i) {
        const cplx g(u(rng), u(rng)), f(u(rng), u(rng));
        const double g2 = std::norm(g), f2 = std::norm(f);
        EXPECT_LE(std::abs(radical_su11(g2, f2) - std::abs(f2 - g2)), 1e-13 * std::max(1.0, g2 + f2));
        EXPECT_LE(std::abs(radical_su2(g2, f2) - (f2 + g2)), 1e-13 * std::max(1.0, g2 + f2));
    }
    // near-equal magnitudes are where naive evaluation cancels
    EXPECT_EQ(radical_su11(1.0, 1.0), 0.0);
    const double x = 1.0 + 1e-9;
    EXPECT_EQ(radical_su11(1.0, x), x - 1.0);
}

TEST(AnalyticSu11, Examples) {
    // oracle: lowest KG_upper eigenvalue in the N_d = 0 sector is |f|² (n_b + 1 at n = 0)
    EXPECT_NEAR(analytic_energy_su11(params(0.0, 1.0), 0, 0, Branch::Plus).E, std::sqrt(2.0), 1e-15);
    const auto lv = analytic_energy_su11(params(2.0, 1.0), 1, 3, Branch::Minus);
    EXPECT_NEAR(lv.kg, 12.0, 1e-13);
    EXPECT_NEAR(lv.E, -std::sqrt(13.0), 1e-14);
    EXPECT_THROW(analytic_energy_su11(params(2.0, 1.0), -1, 0, Branch::Plus), DomainError);
}

TEST(AnalyticSu11, EqualCouplingsCollapse) {
    for (int nl = 0; nl < 5; ++nl)
        for (int mn = 0; mn < 5; ++mn) {
            const auto p = params(cplx(0.6, 0.8), 1.0);
            EXPECT_NEAR(analytic_energy_su11(p, nl, mn, Branch::Plus).E, 1.0, 1e-15);
            EXPECT_NEAR(simplified_energy_su11(p, nl, Branch::Minus), -1.0, 1e-15);
        }
}

TEST(AnalyticSu11, SimplifiedFormRegimes) {
    // |f| > |g|: general == reduced; |g| > |f|: ħ²(|g|²−|f|²)(n_l + m_n)
    for (int nl = 0; nl < 6; ++nl)
        for (int mn = 0; mn < 6; ++mn) {
            EXPECT_NEAR(kg_su11(params(0.5, 1.5), nl, mn), simplified_kg_su11(params(0.5, 1.5), nl), 1e-12);
            EXPECT_NEAR(kg_su11(params(1.5, 0.5), nl, mn), 2.0 * (nl + mn), 1e-12);
        }
}

TEST(AnalyticSu11, PrintedReducedFormIsTwiceTheGeneralForm) {
    const auto p = params(0.3, 1.2);
    for (int nl = 0; nl < 5; ++nl)
        EXPECT_NEAR(simplified_kg_su11_as_printed(p, nl), 2.0 * kg_su11(p, nl, 0), 1e-12);
}

TEST(AnalyticSu2, Examples) {
    EXPECT_NEAR(analytic_energy_su2(params(1.0, 1.0), 1, 2, Branch::Plus, InnerSign::Plus).E, std::sqrt(7.0), 1e-14);
    const auto p = params(cplx(0.3, 0.4), cplx(1.0, -1.0));
    for (int nl = 0; nl < 5; ++nl) {
        const auto a = analytic_energy_su2(p, nl, 0, Branch::Plus, InnerSign::Plus);
        const auto b = analytic_energy_su2(p, nl, 0, Branch::Plus, InnerSign::Minus);
        EXPECT_EQ(a.E, b.E);
        EXPECT_EQ(a.inner, InnerSign::NA);
        EXPECT_NEAR(a.kg, (std::norm(p.f) + std::norm(p.g)) * nl, 1e-13);
    }
}

TEST(AnalyticSu2, Dirac2p1Reduction) {
    for (double xi : {0.05, 0.1, 0.25}) {
        const auto pre = special_case_params(SpecialCase::dirac2p1(xi), ModelParams{});
        EXPECT_EQ(pre.kind, ModelKind::JC_JC);
        for (int nl = 0; nl <= 10; ++nl)
            for (int mn = 0; mn <= 4; ++mn) {
                const auto lv = analytic_energy_su2(pre.params, nl, mn, Branch::Plus, InnerSign::Minus);
                EXPECT_NEAR(lv.E, std::sqrt(1.0 + 4.0 * xi * nl), 1e-12);
            }
    }
}

TEST(Presets, Dirac1p1) {
    const double w = 0.3;
    ModelParams base;
    base.mc2 = 2.0;
    const auto pre = special_case_params(SpecialCase::dirac1p1(w), base);
    EXPECT_EQ(pre.kind, ModelKind::JC_AJC);
    EXPECT_EQ(pre.params.g, cplx{});
    for (int nl = 0; nl < 8; ++nl) {
        const double target = 2.0 * w * base.mc2 * (nl + 1);
        EXPECT_NEAR(simplified_kg_su11(pre.params, nl), target, 1e-12);
        EXPECT_NEAR(kg_su11(pre.params, nl, 3), target, 1e-12);
    }
    // the printed pairing: factor 2 in the reduced form, half the coupling
    ModelParams printed = pre.params;
    printed.f = dirac1p1_f_as_printed(w, base);
    for (int nl = 0; nl < 8; ++nl) {
        EXPECT_NEAR(simplified_kg_su11_as_printed(printed, nl), 2.0 * w * base.mc2 * (nl + 1), 1e-12);
        EXPECT_NEAR(kg_su11(printed, nl, 0), w * base.mc2 * (nl + 1), 1e-12);
    }
}

TEST(Tilting, Parameters) {
    const auto t0 = tilting_parameters(ModelKind::JC_AJC, params(0.0, 1.0));
    EXPECT_EQ(t0.xi, cplx{});
    const auto t = tilting_parameters(ModelKind::JC_AJC, params(1.0, 2.0));
    EXPECT_NEAR(t.theta, std::atanh(0.8), 1e-14);
    EXPECT_NEAR(t.theta, 1.0986123, 1e-7);
    EXPECT_NEAR(std::abs(t.zeta), 0.5, 1e-15);
    EXPECT_THROW(tilting_parameters(ModelKind::JC_AJC, params(1.0, cplx(0.0, 1.0))), DegenerateCouplingError);
    EXPECT_NO_THROW(tilting_parameters(ModelKind::JC_JC, params(1.0, 1.0)));
}

TEST(Tilting, ZeroGIsIdentityForJcAjc) {
    const auto p = params(0.0, 1.3);
    const auto s = make_sector(ChargeKind::DifferenceNd, -1, 30);
    const auto r = verify_tilting(ModelKind::JC_AJC, p, s, tilting_parameters(ModelKind::JC_AJC, p));
    EXPECT_EQ(r.offdiag, 0.0);
    EXPECT_LE(r.diag_dev, 1e-13);
}

TEST(Tilting, Su2ExactSector) {
    const auto p = params(2.0, 1.0);
    const auto s = make_sector(ChargeKind::SumNs, 5, 5);
    const auto t = tilting_parameters(ModelKind::JC_JC, p);
    for (auto c : {Component::Upper, Component::Lower}) {
        const auto r = verify_tilting(ModelKind::JC_JC, p, s, t, c);
        EXPECT_LE(r.offdiag, 1e-10);
        EXPECT_LE(r.diag_dev, 1e-10);
    }
    // |f| > |g| and |f| = |g| use the other half of the atan2 range
    for (auto q : {params(1.0, 2.0), params(1.0, 1.0), params(0.0, 1.0)}) {
        const auto r = verify_tilting(ModelKind::JC_JC, q, s, tilting_parameters(ModelKind::JC_JC, q));
        EXPECT_LE(r.max(), 1e-10);
    }
}

TEST(Tilting, Su11LowStates) {
    const auto p = params(1.0, 2.0);
    const auto s = make_sector(ChargeKind::DifferenceNd, 0, 150);
    const auto t = tilting_parameters(ModelKind::JC_AJC, p);
    for (auto c : {Component::Upper, Component::Lower}) {
        const auto r = verify_tilting(ModelKind::JC_AJC, p, s, t, c, 10);
        EXPECT_LE(r.offdiag, 1e-7);
        EXPECT_LE(r.diag_dev, 1e-7);
    }
}

TEST(Tilting, RandomComplexPairs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(0.2, 2.0), ph(-kPi, kPi), ratio(0.05, 0.75);
    for (int i = 0; i < 10; ++i) {
        const double big = mag(rng), small = big * ratio(rng);
        const bool swap = i % 2 == 1;
        const auto p = params(std::polar(swap ? big : small, ph(rng)), std::polar(swap ? small : big, ph(rng)));
        for (auto k : {ModelKind::JC_AJC, ModelKind::JC_JC}) {
            const auto s = k == ModelKind::JC_AJC ? make_sector(ChargeKind::DifferenceNd, i % 3 - 1, 160)
                                                  : make_sector(ChargeKind::SumNs, 7, 7);
            const auto r = verify_tilting(k, p, s, tilting_parameters(k, p), Component::Upper, 10);
            EXPECT_LE(r.max(), 1e-7) << to_string(k) << " i=" << i;
        }
    }
}

TEST(NumericSpectrum, ZeroCouplingAndFiniteSectors) {
    const auto z = numeric_spectrum(ModelKind::JC_AJC, Component::Upper, params(0.0, 0.0),
                                    make_sector(ChargeKind::DifferenceNd, 0, 10), 5);
    for (double v : z.values) EXPECT_EQ(v, 0.0);
    const auto p = params(cplx(0.4, 0.9), 1.3);
    const double s = std::norm(p.f) + std::norm(p.g);
    for (int n = 0; n <= 8; ++n) {
        const auto sp = numeric_spectrum(ModelKind::JC_JC, Component::Upper, p, make_sector(ChargeKind::SumNs, n, 8), n + 1);
        ASSERT_EQ(sp.values.size(), static_cast<std::size_t>(n + 1));
        for (int i = 0; i <= n; ++i) EXPECT_NEAR(sp.values[i], s * i, 1e-12 * s * (n + 1));
    }
}

TEST(NumericSpectrum, MatchesAnalyticSu11) {
    const auto p = params(0.0, 1.0);
    const auto sp = numeric_spectrum(ModelKind::JC_AJC, Component::Upper, p, make_sector(ChargeKind::DifferenceNd, 0, 60), 10);
    for (int n = 0; n < 10; ++n) EXPECT_NEAR(sp.values[n], kg_su11(p, n, 0), 1e-10);
}

TEST(NumericSpectrum, NotConvergedWhenTruncated) {
    // JC-JC sector with N_s above the cutoff is cut off asymmetrically
    EXPECT_THROW(numeric_spectrum(ModelKind::JC_JC, Component::Upper, params(1.0, 0.7),
                                  make_sector(ChargeKind::SumNs, 12, 8), 3),
                 NotConvergedError);
    EXPECT_THROW(numeric_spectrum(ModelKind::JC_JC, Component::Upper, params(1.0, 0.7),
                                  make_sector(ChargeKind::SumNs, 2, 8), 4),
                 DomainError);
}

TEST(NumericSpectrum, SectorFormulaIncludingPositiveNd) {
    for (auto p : {params(1.0, 2.0), params(2.0, 1.0)})
        for (int d = -3; d <= 3; ++d)
            for (auto c : {Component::Upper, Component::Lower}) {
                const auto sp = numeric_spectrum(ModelKind::JC_AJC, c, p, make_sector(ChargeKind::DifferenceNd, d, 120), 8);
                for (int n = 0; n < 8; ++n) {
                    const double a = sector_kg_su11(p, c, d, n);
                    EXPECT_NEAR(sp.values[n], a, 1e-9 * std::max(1.0, a)) << "d=" << d << " n=" << n;
                }
                if (d <= 0 && c == Component::Upper) {
                    for (int n = 0; n < 8; ++n) EXPECT_NEAR(sector_kg_su11(p, c, d, n), kg_su11(p, n, -d), 1e-12);
                }
            }
}

TEST(NumericSpectrum, PartnerShifts) {
    // JC-AJC: upper level (n_l, m_n) equals the lower-component formula at (n_l + 1, m_n − 2)
    const auto p = params(cplx(0.3, 0.5), cplx(1.2, 0.1));
    for (int mn = 2; mn <= 5; ++mn) {
        const auto up = numeric_spectrum(ModelKind::JC_AJC, Component::Upper, p, make_sector(ChargeKind::DifferenceNd, -mn, 120), 6);
        const auto lo = numeric_spectrum(ModelKind::JC_AJC, Component::Lower, p,
                                         make_sector(ChargeKind::DifferenceNd, -(mn - 2), 120), 7);
        for (int n = 0; n < 6; ++n) EXPECT_NEAR(up.values[n], lo.values[n + 1], 1e-8 * std::max(1.0, up.values[n]));
    }
    // JC-JC: upper sector N at rank i + 1 equals lower sector N − 2 at rank i (n_l → n_l − 1)
    for (int n = 2; n <= 10; ++n) {
        const auto up = numeric_spectrum(ModelKind::JC_JC, Component::Upper, p, make_sector(ChargeKind::SumNs, n, n), n + 1);
        const auto lo = numeric_spectrum(ModelKind::JC_JC, Component::Lower, p, make_sector(ChargeKind::SumNs, n - 2, n), n - 1);
        for (int i = 0; i + 1 <= n - 1; ++i) EXPECT_NEAR(up.values[i + 1], lo.values[i], 1e-10);
    }
}

TEST(Ndpa, Energies) {
    ModelParams base;
    for (int nl = 0; nl < 4; ++nl)
        for (int m = 0; m < 4; ++m) {
            EXPECT_NEAR(ndpa_energy(1.3, 1.3, nl, m, Branch::Plus, base).E, 1.0, 1e-15);
            const auto pre = special_case_params(SpecialCase::ndpa(1.0, 2.0, 0.4), base);
            const double a = ndpa_energy(1.0, 2.0, nl, m, Branch::Plus, base).E;
            EXPECT_NEAR(a, analytic_energy_su11(pre.params, nl, m, Branch::Plus).E, 1e-12);
            const auto pre2 = special_case_params(SpecialCase::ndpa(2.5, 0.7, -1.0), base);
            EXPECT_NEAR(ndpa_energy(2.5, 0.7, nl, m, Branch::Minus, base).E,
                        analytic_energy_su11(pre2.params, nl, m, Branch::Minus).E, 1e-12);
        }
    // worked example: ω₁ = 1, ω₂ = 2, n_l = 0, m = 1 gives E² = 3
    EXPECT_NEAR(ndpa_energy(1.0, 2.0, 0, 1, Branch::Plus, base).E, std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(ndpa_energy_as_printed(1.0, 2.0, 0, 1, Branch::Plus, base), std::sqrt(5.0), 1e-14);
}

TEST(Ndpa, MatchesNumericSpectrum) {
    ModelParams base;
    const auto pre = special_case_params(SpecialCase::ndpa(0.2, 0.5, 0.3), base);
    for (int m = 0; m <= 3; ++m) {
        const auto sp = numeric_spectrum(ModelKind::JC_AJC, Component::Upper, pre.params,
                                         make_sector(ChargeKind::DifferenceNd, -m, 150), 6);
        for (int nl = 0; nl < 6; ++nl) {
            const double e = ndpa_energy(0.2, 0.5, nl, m, Branch::Plus, base).E;
            EXPECT_NEAR(sp.values[nl] + 1.0, e * e, 1e-9 * e * e);
        }
    }
}

TEST(CoupledOscillators, Energies) {
    ModelParams base;
    base.mc2 = 3.0;
    const double w1 = 0.4, w2 = 0.9;
    const auto pre = special_case_params(SpecialCase::coupled_oscillators(w1, w2, 0.7), base);
    EXPECT_EQ(pre.kind, ModelKind::JC_JC);
    for (int nl = 0; nl < 4; ++nl)
        for (int mn = 0; mn < 4; ++mn)
            for (auto in : {InnerSign::Plus, InnerSign::Minus}) {
                const int tmu = in == InnerSign::Plus ? mn : -mn;
                const auto lv = coupled_osc_energy(w1, w2, HalfInt::from_twice(2 * nl + mn), HalfInt::from_twice(tmu),
                                                   Branch::Plus, base);
                EXPECT_NEAR(lv.E, analytic_energy_su2(pre.params, nl, mn, Branch::Plus, in).E, 1e-12);
            }
    EXPECT_NEAR(coupled_osc_energy(w1, w2, HalfInt{}, HalfInt{}, Branch::Minus, base).E, -3.0, 1e-15);
    // lowest level of each sector (mu = −j) is E = mc²
    for (int tj = 0; tj < 8; ++tj)
        EXPECT_NEAR(coupled_osc_energy(w1, w2, HalfInt::from_twice(tj), HalfInt::from_twice(-tj), Branch::Plus, base).E,
                    3.0, 1e-14);
    // equal frequencies reduce to the 2+1 preset
    const auto d = special_case_params(SpecialCase::dirac2p1(0.25), base);
    const auto c = special_case_params(SpecialCase::coupled_oscillators(0.25, 0.25, 0.0), base);
    EXPECT_NEAR(std::abs(d.params.f - c.params.f), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d.params.g - c.params.g), 0.0, 1e-15);
}

TEST(CoupledOscillators, PrintedFormDiffers) {
    ModelParams base;
    const auto lv = coupled_osc_energy(1.0, 1.0, HalfInt::from_int(1), HalfInt::from_int(-1), Branch::Plus, base);
    const double printed = coupled_osc_energy_as_printed(1.0, 1.0, HalfInt::from_int(1), HalfInt::from_int(-1),
                                                         Branch::Plus, base);
    EXPECT_NEAR(lv.E, 1.0, 1e-15);
    EXPECT_GT(std::abs(printed - lv.E), 0.5);
}

TEST(NonRelativistic, CoupledOscillatorsFirstExcited) {
    const auto c = SpecialCase::coupled_oscillators(0.8, 1.3, 0.2);
    const auto r = nonrelativistic_limit_check(c, {0, 1}, InnerSign::Plus, 1e6);
    EXPECT_NEAR(r.eps_analytic, 2.1, 1e-12);
    EXPECT_LE(r.rel_error, 1e-5);
    EXPECT_EQ(r.offset, 0.0);
}

TEST(NonRelativistic, NdpaWithOffset) {
    const auto c = SpecialCase::ndpa(0.7, 1.1, 0.3);
    const auto r = nonrelativistic_limit_check(c, {1, 0}, InnerSign::NA, 1e6);
    EXPECT_NEAR(r.offset, 1.1, 1e-15);
    EXPECT_LE(r.rel_error, 1e-5);
}

TEST(NonRelativistic, FirstOrderDecay) {
    for (const auto& c : {SpecialCase::ndpa(0.7, 1.1, 0.3), SpecialCase::coupled_oscillators(0.8, 1.3, 0.2)}) {
        std::vector<LimitReport> reps;
        for (double s : {1e4, 1e5, 1e6}) reps.push_back(nonrelativistic_limit_check(c, {1, 1}, InnerSign::Plus, s));
        EXPECT_NEAR(limit_decay_exponent(reps), -1.0, 0.05);
        const double ratio = nonrelativistic_limit_check(c, {1, 1}, InnerSign::Plus, 2e5).rel_error / reps[1].rel_error;
        EXPECT_NEAR(ratio, 0.5, 0.02);
    }
}

TEST(NonRelativistic, ZeroFrequencies) {
    const auto r = nonrelativistic_limit_check(SpecialCase::coupled_oscillators(0.0, 0.0, 0.0), {2, 1}, InnerSign::Plus, 1e6);
    EXPECT_EQ(r.eps_model, 0.0);
    EXPECT_EQ(r.eps_analytic, 0.0);
    EXPECT_EQ(r.rel_error, 0.0);
}
