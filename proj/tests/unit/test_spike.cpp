#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ssdt/error.hpp"
#include "ssdt/spike.hpp"

TEST_CASE("isotropic spike parameters match the closed form") {
    const double gamma = 0.5;
    const ssdt::StieltjesEvaluator ev(oracle::single_atom_model(1.0, 1.0, gamma));
    const double lambda = 2.0 * ev.lambda_star();
    const ssdt::SpikeParams sp = ssdt::spike_from_lambda(ev, lambda);
    const oracle::MpTransform mp = oracle::mp_transform(gamma, lambda);
    const double d = lambda * mp.s * mp.sbar;
    const double d1 = mp.s * mp.sbar + lambda * mp.s1 * mp.sbar + lambda * mp.s * mp.sbar1;
    CHECK(oracle::rel_diff(sp.theta2, 1.0 / d) <= 1e-10);
    CHECK(oracle::rel_diff(sp.c2, mp.s * d / d1) <= 1e-10);
    CHECK(oracle::rel_diff(sp.cbar2, mp.sbar * d / d1) <= 1e-10);
    // Spiked MP: θ² ↦ λ = (1+θ²)(γ+θ²)/θ², c² = (θ⁴−γ)/(θ⁴+γθ²).
    const double t2 = sp.theta2;
    CHECK(oracle::rel_diff(lambda, (1 + t2) * (gamma + t2) / t2) <= 1e-10);
    CHECK(oracle::rel_diff(sp.c2, (t2 * t2 - gamma) / (t2 * t2 + gamma * t2)) <= 1e-10);
}

TEST_CASE("cosines lie in (0, 1), their ratio is s / sbar, and theta^2 increases") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 25; ++i) {
        const ssdt::StieltjesEvaluator ev(oracle::random_small_model(rng));
        double prev = 0.0;
        for (int k = 0; k < 40; ++k) {
            const double lambda = ev.lambda_star() * (1.001 + 0.25 * k);
            const ssdt::StieltjesPoint p = ev.point(lambda);
            const ssdt::SpikeParams sp = ssdt::spike_from_point(p);
            CHECK(sp.c2 > 0.0);
            CHECK(sp.c2 < 1.0);
            CHECK(sp.cbar2 > 0.0);
            CHECK(sp.cbar2 < 1.0);
            CHECK(oracle::rel_diff(sp.c2 / sp.cbar2, p.s / p.sbar) <= 1e-14);
            CHECK(sp.theta2 > prev);
            prev = sp.theta2;
        }
    }
}

TEST_CASE("cosines vanish at the edge") {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 10; ++i) {
        const ssdt::StieltjesEvaluator ev(oracle::random_small_model(rng));
        double prev_c2 = 1.0;
        double prev_cbar2 = 1.0;
        for (int k = 1; k <= 7; ++k) {
            const ssdt::SpikeParams sp = ssdt::spike_from_lambda(ev, ev.lambda_star() * (1.0 + std::pow(10.0, -k)));
            CHECK(sp.c2 < prev_c2);
            CHECK(sp.cbar2 < prev_cbar2);
            prev_c2 = sp.c2;
            prev_cbar2 = sp.cbar2;
        }
        CHECK(prev_c2 < 0.05);
        CHECK(prev_cbar2 < 0.05);
    }
}

TEST_CASE("lambda -> theta^2 -> lambda round trip") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 25; ++i) {
        const ssdt::StieltjesEvaluator ev(oracle::random_small_model(rng));
        for (double f : {1.0001, 1.01, 1.5, 3.0, 20.0}) {
            const double lambda = f * ev.lambda_star();
            const ssdt::SpikeParams forward = ssdt::spike_from_lambda(ev, lambda);
            const ssdt::SpikeParams back = ssdt::lambda_from_theta(ev, forward.theta2);
            CHECK(oracle::rel_diff(back.lambda, lambda) <= 1e-9);
            CHECK(oracle::rel_diff(back.c2, forward.c2) <= 1e-6);
        }
    }
}

TEST_CASE("undetectable spikes are rejected") {
    const ssdt::StieltjesEvaluator ev(ssdt::load_model(oracle::data_path("two_atom.json")));
    const double at_edge = 1.0 / ssdt::evaluate_stieltjes(ev.model(), ev.lambda_star() * (1 + 1e-12)).d;
    for (double theta2 : {at_edge, 1e-12, 0.0, -1.0}) {
        try {
            ssdt::lambda_from_theta(ev, theta2);
            FAIL("expected UndetectableSignal");
        } catch (const ssdt::Error& e) {
            CHECK(e.code() == ssdt::ErrorCode::kUndetectableSignal);
        }
    }
    CHECK(ssdt::undetectable_bound(ev) >= ssdt::detection_threshold(ev));
    CHECK(oracle::rel_diff(ssdt::undetectable_bound(ev), ssdt::detection_threshold(ev)) <= 1e-3);
}

TEST_CASE("the experimental spike strength is detectable") {
    const ssdt::StieltjesEvaluator ev(ssdt::load_model(oracle::data_path("two_atom.json")));
    const ssdt::SpikeParams sp = ssdt::lambda_from_theta(ev, ssdt::detection_threshold(ev) + 20.0);
    CHECK(sp.lambda > ev.lambda_star());
    CHECK(sp.c2 > 0.0);
    CHECK(sp.cbar2 > 0.0);
}

TEST_CASE("spike_from_lambda below the edge fails") {
    const ssdt::StieltjesEvaluator ev(oracle::single_atom_model(1.0, 1.0, 0.5));
    CHECK_THROWS_AS(ssdt::spike_from_lambda(ev, 0.9 * ev.lambda_star()), ssdt::Error);
    CHECK(ssdt::spike_from_lambda(ev.model(), 2.0 * ev.lambda_star()).lambda == 2.0 * ev.lambda_star());
}
