// Prints the refinement ladder of the Markovian lift for one rough and one
// smooth Hurst index, then compares a short Monte Carlo run with the
// quadrature covariance at the default configuration.

#include <greylift/greylift.hpp>

#include <cstdio>
#include <vector>

int main() {
    using namespace greylift;
    std::vector<double> probes;
    for (int i = 0; i <= 18; ++i) probes.push_back(0.1 + 0.05 * i);

    for (double h : {0.25, 0.75}) {
        const Regime regime = regime_for_hurst(h);
        std::printf("H = %.2f (%s), integrability value %.6f\n", h, to_string(regime), integrability_value(h, regime));
        std::printf("  %-6s %6s %12s %12s %14s %14s\n", "rung", "m", "x_min", "x_max", "sup rel err", "trunc bound");
        LiftConfig cfg = lift_ladder_base(h);
        for (int rung = 0; rung < 4; ++rung) {
            const LiftNodes nodes = build_nodes(h, regime, cfg.m, cfg.x_min, cfg.x_max);
            std::printf("  %-6d %6zu %12.3e %12.3e %14.4e %14.4e%s\n", rung, cfg.m, cfg.x_min, cfg.x_max,
                        lift_sup_relative_error(nodes, probes), truncation_bound(h, regime, cfg.x_min, cfg.x_max, 1.0),
                        rung == 2 ? "  <- default" : "");
            cfg = double_config(cfg);
        }

        const LiftConfig def = default_lift_config(h);
        const LiftNodes nodes = build_nodes(h, regime, def.m, def.x_min, def.x_max);
        const TimeGrid grid = TimeGrid::uniform(1.0, 10);
        const LiftSimulation sim = simulate_bank(nodes, grid, 20000, 1, 2026, def);
        std::printf("  Monte Carlo, 20000 paths, noise rank %zu\n", sim.noise_rank);
        for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}, std::pair{0.2, 0.7}}) {
            const McEstimate c = empirical_cov(sim.paths, t, s);
            std::printf("    cov(%.1f, %.1f): lift %.5f  fbm %.5f  empirical %.5f +- %.5f\n", t, s,
                        lift_covariance(nodes, t, s), fbm_kernel(h, t, s), c.value, c.std_error);
        }
        std::printf("\n");
    }
    return 0;
}
