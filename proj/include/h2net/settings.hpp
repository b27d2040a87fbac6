#pragma once

namespace h2net {

// Global numeric-settings record threaded through every solver call.
// All fields are the documented defaults scaled by tol_scale; the
// H2NET_NUM_TOL environment variable overrides tol_scale at startup.
struct NumericSettings {
    double tol_scale = 1.0;

    double lu_pivot_rel = 1e-13;      // pivot floor, relative to ||A||_F
    double jacobi_off_rel = 1e-12;    // off-diagonal target, relative to ||S||_F
    int    jacobi_max_sweeps = 100;
    double expm_overflow_norm = 1e4;  // reject ||A t||_F above this
    double pd_pivot_rel = 1e-12;      // Cholesky pivot floor, relative to trace/n
    double lyap_residual_rel = 1e-9;  // relative to 1 + ||Q||_F
    double care_step_tol = 1e-11;     // Newton step size, relative to 1 + ||P||_F
    int    care_max_newton = 60;
    double care_residual_rel = 1e-8;  // relative to 1 + ||P||_F^2
    int    bass_max_retries = 4;
    double strict_eig_margin = 1e-10; // certificate: max eig < -margin * ||M||_F
    double zero_eig_clamp = 1e-10;    // spectrum: clamp eigenvalues this close to 0

    double lu_pivot_floor(double norm_a) const { return tol_scale * lu_pivot_rel * norm_a; }
    double jacobi_off_floor(double norm_s) const { return tol_scale * jacobi_off_rel * norm_s; }
    double pd_pivot_floor(double trace, int n) const {
        return tol_scale * pd_pivot_rel * trace / static_cast<double>(n);
    }

    // Process-wide record; tol_scale comes from H2NET_NUM_TOL when set.
    static const NumericSettings& global();
};

} // namespace h2net
