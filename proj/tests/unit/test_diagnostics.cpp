#include "bbm/config.hpp"
#include "bbm/diagnostics.hpp"
#include "bbm/timestep.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bbm;

namespace {

constexpr double pi = std::numbers::pi;

RunResult run(const Field1D& u0, const Model& m, double horizon, double dt, int record_stride,
              int snapshot_stride)
{
    IntegratorConfig c;
    c.dt = dt;
    c.record_stride = record_stride;
    c.snapshot_stride = snapshot_stride;
    return integrate(u0, horizon, m, c);
}

EnergyLedger synthetic_ledger(double horizon, double dt, double (*rate)(double),
                              double (*cumulative)(double))
{
    EnergyLedger ledger;
    for (int k = 0; k * dt <= horizon + 1e-12; ++k) {
        const double t = k * dt;
        ledger.push_back({t, 1.0 - cumulative(t), 0.0, rate(t), cumulative(t), 0.0});
    }
    return ledger;
}

}  // namespace

TEST_CASE("energy on both domains")
{
    const TorusGrid g(64);
    const Field1D c = Field1D::sample(g, [](double x) { return std::cos(x); });
    CHECK(energy(c) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(energy(c) == doctest::Approx(pi * std::pow(sobolev_norm(c, 1.0), 2)).epsilon(1e-14));
    CHECK(energy(Field1D::zeros(g)) == 0.0);
    CHECK(energy(Field1D::constant(IntervalGrid(1.0, 32), 1.0)) == doctest::Approx(0.5));
}

TEST_CASE("dissipation_rate examples")
{
    const TorusGrid g(64);
    const Model a_one = Model::torus(Variant::A, DampingProfile::constant(g, 1.0));
    CHECK(dissipation_rate(Field1D::zeros(g), a_one) == 0.0);
    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    CHECK(dissipation_rate(s, a_one) == doctest::Approx(pi).epsilon(1e-14));
    const Model b_one = Model::torus(Variant::B, DampingProfile::constant(g, 1.0));
    CHECK(dissipation_rate(s, b_one) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(dissipation_rate(s, Model::torus(Variant::A, DampingProfile::none(g))) == 0.0);

    const IntervalGrid ig(pi, 64);
    const Field1D two = Field1D::constant(ig, 2.0);
    CHECK(dissipation_rate(two, Model::interval({1.0, 0.0})) == doctest::Approx(4.0));
    CHECK(dissipation_rate(two, Model::interval({0.5, 0.5})) == 0.0);
    CHECK(dissipation_rate(Field1D::zeros(ig), Model::interval({1.0, 0.0})) == 0.0);
}

TEST_CASE("energy_balance_residual examples")
{
    const TorusGrid g(32);
    const Model m = Model::torus(Variant::A, DampingProfile::bump(g, pi, 2.0, 1.0));
    const RunResult zero = run(Field1D::zeros(g), m, 1.0, 0.1, 1, 1);
    CHECK(energy_balance_residual(zero.ledger) == 0.0);

    const Model undamped = Model::torus(Variant::A, DampingProfile::none(g));
    const RunResult free = run(random_smooth(g, 3, 0.5, 5), undamped, 2.0, 0.2, 1, 100);
    double drift = 0.0;
    for (const auto& r : free.ledger) {
        CHECK(r.dissipation_rate == 0.0);
        drift = std::max(drift, std::abs(r.energy - free.ledger.front().energy));
    }
    CHECK(energy_balance_residual(free.ledger) == drift);
    CHECK(energy_balance_residual({}) == 0.0);
}

TEST_CASE("energy balance residual shrinks at fourth order")
{
    const TorusGrid g(64);
    const Field1D u0 = Field1D::sample(g, [](double x) { return 0.5 * std::cos(x); });
    for (Variant v : {Variant::A, Variant::B}) {
        const Model m = Model::torus(v, DampingProfile::bump(g, pi, 2.0, 1.0));
        std::vector<double> res;
        for (double dt : {0.1, 0.05, 0.025})
            res.push_back(energy_balance_residual(run(u0, m, 10.0, dt, 1, 1 << 30).ledger));
        CHECK(res[0] / res[1] >= 12.0);
        CHECK(res[0] / res[1] <= 20.0);
        CHECK(res[1] / res[2] >= 12.0);
        CHECK(res[1] / res[2] <= 20.0);
    }
}

TEST_CASE("dissipative runs: monotone energy, bounded total dissipation, invariant mean")
{
    const TorusGrid g(128);
    const Field1D ub = Field1D::sample(g, [](double x) { return 1.0 + 0.3 * std::cos(x); });
    for (Variant v : {Variant::A, Variant::B}) {
        const Model m = Model::torus(v, DampingProfile::bump(g, 2.0, 1.5, 3.0));
        const RunResult r = run(ub, m, 5.0, 1e-2, 5, 1 << 30);
        const double res = energy_balance_residual(r.ledger);
        CHECK(res <= 1e-7 * r.ledger.front().energy);
        for (std::size_t k = 1; k < r.ledger.size(); ++k) {
            CHECK(r.ledger[k].energy <= r.ledger[k - 1].energy + 10 * res);
            CHECK(r.ledger[k].dissipation_rate >= 0.0);
        }
        CHECK(r.ledger.back().cumulative_dissipation <= r.ledger.front().energy + 10 * res);
        if (v == Variant::B)
            for (const auto& rec : r.ledger)
                CHECK(std::abs(rec.mean - 1.0) <= 1e-12 * 2.0);
    }
}

TEST_CASE("tail_dissipation")
{
    CHECK_THROWS_AS(tail_dissipation({}, 0.0), std::invalid_argument);

    const TorusGrid g(32);
    const Model m = Model::torus(Variant::A, DampingProfile::bump(g, pi, 2.0, 1.0));
    const TailReport zero = tail_dissipation(run(Field1D::zeros(g), m, 3.0, 0.1, 1, 100).ledger, 1.0);
    REQUIRE(zero.integrals.size() == 3);
    for (double i : zero.integrals)
        CHECK(i == 0.0);

    const Model undamped = Model::torus(Variant::A, DampingProfile::none(g));
    const TailReport free =
        tail_dissipation(run(random_smooth(g, 1, 0.3, 4), undamped, 3.0, 0.1, 1, 100).ledger, 1.0);
    for (double i : free.integrals)
        CHECK(i == 0.0);

    const auto flat = synthetic_ledger(
        6.0, 0.5, [](double) { return 2.0; }, [](double t) { return 2.0 * t; });
    const TailReport rep = tail_dissipation(flat, 1.5);
    REQUIRE(rep.integrals.size() == 4);
    for (double i : rep.integrals)
        CHECK(i == doctest::Approx(3.0));
    CHECK(rep.decreasing_from == 0);
    CHECK(rep.eventually_decreasing);

    const auto decaying = synthetic_ledger(
        10.0, 0.5, [](double t) { return std::exp(-t); }, [](double t) { return 1 - std::exp(-t); });
    const TailReport dec = tail_dissipation(decaying, 1.0);
    REQUIRE(dec.integrals.size() == 10);
    for (std::size_t n = 0; n < 10; ++n)
        CHECK(dec.integrals[n] ==
              doctest::Approx(std::exp(-double(n)) - std::exp(-double(n + 1))).epsilon(1e-12));
    CHECK(dec.decreasing_from == 0);
    CHECK(dec.last / dec.first == doctest::Approx(std::exp(-9.0)));

    // Growth at the end defeats "eventually decreasing".
    const auto growing = synthetic_ledger(
        6.0, 0.5, [](double t) { return t; }, [](double t) { return t * t / 2; });
    const TailReport up = tail_dissipation(growing, 1.0);
    CHECK(up.decreasing_from == up.integrals.size() - 1);
    CHECK_FALSE(up.eventually_decreasing);
}

TEST_CASE("band_observable examples")
{
    const TorusGrid g(64);
    const Band upper{0.0, pi};
    CHECK(band_observable(Field1D::zeros(g), upper, Variant::A) == 0.0);
    CHECK(band_observable(Field1D::constant(g, 3.0), upper, Variant::B) == 0.0);
    const Field1D s = Field1D::sample(g, [](double x) { return std::sin(x); });
    CHECK(band_observable(s, upper, Variant::A) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(band_observable(s, upper, Variant::B) == doctest::Approx(pi / 2).epsilon(1e-14));
    // A band written past 2 pi is read periodically.
    CHECK(band_observable(s, Band{pi, 2 * pi + 0.5}, Variant::A) ==
          doctest::Approx(band_observable(s, Band{pi, 2 * pi}, Variant::A) +
                          band_observable(s, Band{0.0, 0.5}, Variant::A))
              .epsilon(1e-13));

    const IntervalGrid ig(2.0, 32);
    const Field1D lin = Field1D::sample(ig, [](double x) { return 1 + x; });
    CHECK(band_observable(lin, Band{}, Variant::C) == doctest::Approx(1.0 + 9.0));
}

TEST_CASE("decay_report")
{
    const TorusGrid g(64);
    const Model m = Model::torus(Variant::A, DampingProfile::bump(g, pi, 2.0, 1.0));
    const RunResult zero = run(Field1D::zeros(g), m, 10.0, 0.1, 10, 10);
    const DecayReport z = decay_report(zero.trajectory, m, 1.0, 0.0);
    CHECK(z.times.size() == 11);
    for (const auto& series : z.norms)
        for (double v : series)
            CHECK(v == 0.0);
    CHECK(z.monotone);
    CHECK(z.limit_estimate == 0.0);
    CHECK_FALSE(z.empirical_rate.has_value());

    const Model b = Model::torus(Variant::B, DampingProfile::bump(g, pi, 2.0, 1.0));
    const Field1D ub = Field1D::sample(g, [](double x) { return 1.0 + 0.3 * std::cos(x); });
    const RunResult rb = run(ub, b, 10.0, 1e-2, 10, 50);
    const DecayReport db = decay_report(rb.trajectory, b, 1.0, 1e-9);
    CHECK(db.target == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& snap : rb.trajectory)
        CHECK(std::abs(mean(snap.u) - 1.0) <= 1e-12);
    CHECK(db.monotone);
    REQUIRE(db.sobolev_indices == std::vector<double>{0.0, 0.5, 0.9});
    for (std::size_t n = 1; n < db.times.size(); ++n)
        CHECK(db.times[n] - db.times[n - 1] >= 1.0 - 1e-12);
    CHECK(db.h1_distance.back() < db.h1_distance.front());
    CHECK(db.empirical_rate.has_value());
    CHECK(*db.empirical_rate > 0.0);
}

TEST_CASE("reference variant A run: H1 norm nonincreasing within 1e-9 per window")
{
    const TorusGrid g(256);
    const Model m = Model::torus(Variant::A, DampingProfile::bump(g, pi, 2.0, 1.0));
    const Field1D u0 = Field1D::sample(g, [](double x) { return 0.5 * std::cos(x); });
    const RunResult r = run(u0, m, 10.0, 1e-3, 100, 1000);
    const DecayReport rep = decay_report(r.trajectory, m, 1.0, 1e-9);
    CHECK(rep.times.size() == 11);
    CHECK(rep.monotone);
    for (std::size_t i = 0; i < rep.norms.size(); ++i)
        CHECK(rep.norms[i].back() < rep.norms[i].front());
}
