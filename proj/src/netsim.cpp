#include "h2net/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "h2net/errors.hpp"

namespace h2net {

void Disturbance::sample(int agent, double t, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (type == Type::Pulse) {
        for (const auto& p : pulses) {
            if (p.agent != agent) continue;
            if (t >= p.start && t < p.start + p.width) {
                out[static_cast<std::size_t>(p.channel)] += p.height;
            }
        }
    } else if (type == Type::Table) {
        for (const auto& tab : tables) {
            if (tab.agent != agent) continue;
            double v = 0.0;
            for (std::size_t k = 0; k < tab.times.size(); ++k) {
                if (tab.times[k] <= t) v = tab.values[k];
                else break;
            }
            out[static_cast<std::size_t>(tab.channel)] += v;
        }
    }
}

namespace {

struct EdgeRef {
    int other;
    double w;
};

void matvec_add(const DenseMatrix& m, const double* v, double* out, double scale = 1.0) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] += scale * s;
    }
}

} // namespace

Trajectory simulate(const AgentModel& model, const WeightedGraph& graph,
                    const ProtocolGains& gains, const Scenario& scenario,
                    RhsForm form, const NumericSettings&) {
    const std::size_t n = model.n();
    const std::size_t m = model.m();
    const std::size_t q = model.q();
    const std::size_t r = model.r();
    const std::size_t p = model.p();
    const std::size_t big_n = static_cast<std::size_t>(graph.node_count);
    if (gains.F.rows() != m || gains.F.cols() != n || gains.G.rows() != n ||
        gains.G.cols() != r) {
        throw InvalidInput("simulate: gain dimensions do not match the model");
    }
    if (scenario.x0.rows() != big_n || scenario.x0.cols() != n) {
        throw InvalidInput("simulate: x0 must be N x n");
    }
    DenseMatrix w0 = scenario.w0;
    if (w0.empty()) {
        w0 = DenseMatrix(big_n, n);
    } else if (w0.rows() != big_n || w0.cols() != n) {
        throw InvalidInput("simulate: w0 must be N x n (or empty for zeros)");
    }
    if (!(scenario.dt > 0.0) || scenario.horizon < scenario.dt) {
        throw InvalidInput("simulate: need dt > 0 and horizon >= dt");
    }
    const auto check_target = [&](int agent, int channel) {
        if (agent < 0 || agent >= graph.node_count || channel < 0 ||
            channel >= static_cast<int>(q)) {
            throw InvalidInput("simulate: disturbance agent/channel out of range");
        }
    };
    for (const auto& pu : scenario.disturbance.pulses) check_target(pu.agent, pu.channel);
    for (const auto& tab : scenario.disturbance.tables) check_target(tab.agent, tab.channel);

    std::vector<std::vector<EdgeRef>> nbrs(big_n);
    for (const auto& e : graph.edges) {
        nbrs[e.i].push_back({e.j, e.w});
        nbrs[e.j].push_back({e.i, e.w});
    }

    // compact Kronecker matrices, built only for that RHS form
    DenseMatrix axx, axw, awx, aww, bxd, bwd;
    if (form == RhsForm::CompactKronecker) {
        const DenseMatrix eye = DenseMatrix::identity(big_n);
        const DenseMatrix lap = laplacian(graph);
        axx = kron(eye, model.A);
        axw = kron(eye, model.B * gains.F);
        awx = kron(lap, gains.G * model.C1);
        aww = kron(eye, model.A - gains.G * model.C1) + kron(lap, model.B * gains.F);
        bxd = kron(eye, model.E);
        bwd = kron(lap, gains.G * model.D1);
    }

    const std::size_t dim = 2 * big_n * n;
    std::vector<double> state(dim);
    for (std::size_t a = 0; a < big_n; ++a) {
        for (std::size_t k = 0; k < n; ++k) {
            state[a * n + k] = scenario.x0(a, k);
            state[big_n * n + a * n + k] = w0(a, k);
        }
    }

    std::vector<double> d_all(big_n * q);
    std::vector<double> u_all(big_n * m);
    std::vector<double> y_all(big_n * r);

    auto sample_disturbance = [&](double t) {
        std::vector<double> di(q);
        for (std::size_t a = 0; a < big_n; ++a) {
            scenario.disturbance.sample(static_cast<int>(a), t, di);
            for (std::size_t c = 0; c < q; ++c) d_all[a * q + c] = di[c];
        }
    };

    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        sample_disturbance(t);
        const double* x_part = y.data();
        const double* w_part = y.data() + big_n * n;
        std::fill(dy.begin(), dy.end(), 0.0);

        for (std::size_t a = 0; a < big_n; ++a) {
            double* ua = u_all.data() + a * m;
            std::fill(ua, ua + m, 0.0);
            matvec_add(gains.F, w_part + a * n, ua);
            double* ya = y_all.data() + a * r;
            std::fill(ya, ya + r, 0.0);
            matvec_add(model.C1, x_part + a * n, ya);
            matvec_add(model.D1, d_all.data() + a * q, ya);
        }

        if (form == RhsForm::CompactKronecker) {
            matvec_add(axx, x_part, dy.data());
            matvec_add(axw, w_part, dy.data());
            matvec_add(bxd, d_all.data(), dy.data());
            matvec_add(awx, x_part, dy.data() + big_n * n);
            matvec_add(aww, w_part, dy.data() + big_n * n);
            matvec_add(bwd, d_all.data(), dy.data() + big_n * n);
            return;
        }

        std::vector<double> su(m), sy(r), cw(r);
        for (std::size_t a = 0; a < big_n; ++a) {
            double* dx = dy.data() + a * n;
            matvec_add(model.A, x_part + a * n, dx);
            matvec_add(model.B, u_all.data() + a * m, dx);
            matvec_add(model.E, d_all.data() + a * q, dx);

            std::fill(su.begin(), su.end(), 0.0);
            std::fill(sy.begin(), sy.end(), 0.0);
            for (const EdgeRef& e : nbrs[a]) {
                const std::size_t b = static_cast<std::size_t>(e.other);
                for (std::size_t c = 0; c < m; ++c) {
                    su[c] += e.w * (u_all[a * m + c] - u_all[b * m + c]);
                }
                for (std::size_t c = 0; c < r; ++c) {
                    sy[c] += e.w * (y_all[a * r + c] - y_all[b * r + c]);
                }
            }
            // innovation: weighted output disagreement minus the observer output
            std::fill(tmp.begin(), tmp.end(), 0.0);
            matvec_add(model.C1, w_part + a * n, tmp.data());
            double* dw = dy.data() + big_n * n + a * n;
            matvec_add(model.A, w_part + a * n, dw);
            matvec_add(model.B, su.data(), dw);
            for (std::size_t row = 0; row < n; ++row) {
                double s = 0.0;
                for (std::size_t c = 0; c < r; ++c) {
                    s += gains.G(row, c) * (sy[c] - tmp[c]);
                }
                dw[row] += s;
            }
        }
    };

    // land exactly on the horizon: h is the requested dt up to rounding
    const std::size_t steps = std::max<long long>(
        1, std::llround(scenario.horizon / scenario.dt));
    const double h = scenario.horizon / static_cast<double>(steps);
    const Incidence inc = incidence(graph);
    const std::size_t n_edges = inc.W.rows();

    Trajectory traj;
    traj.agents = big_n;
    traj.state_dim = n;
    traj.input_dim = m;
    traj.zeta_dim = p * n_edges;
    traj.times.resize(steps + 1);
    traj.x = DenseMatrix(steps + 1, big_n * n);
    traj.w = DenseMatrix(steps + 1, big_n * n);
    traj.u = DenseMatrix(steps + 1, big_n * m);
    traj.zeta = DenseMatrix(steps + 1, p * n_edges);
    traj.disagreement.resize(steps + 1);

    std::vector<double> z_all(big_n * p);
    auto record = [&](std::size_t sample, double t) {
        traj.times[sample] = t;
        const double* x_part = state.data();
        const double* w_part = state.data() + big_n * n;
        sample_disturbance(t);
        for (std::size_t a = 0; a < big_n; ++a) {
            double* ua = u_all.data() + a * m;
            std::fill(ua, ua + m, 0.0);
            matvec_add(gains.F, w_part + a * n, ua);
            double* za = z_all.data() + a * p;
            std::fill(za, za + p, 0.0);
            matvec_add(model.C2, x_part + a * n, za);
            matvec_add(model.D2, ua, za);
        }
        for (std::size_t k = 0; k < big_n * n; ++k) {
            traj.x(sample, k) = x_part[k];
            traj.w(sample, k) = w_part[k];
        }
        for (std::size_t k = 0; k < big_n * m; ++k) traj.u(sample, k) = u_all[k];
        for (std::size_t e = 0; e < n_edges; ++e) {
            const auto& edge = graph.edges[e];
            const std::size_t lo = static_cast<std::size_t>(std::min(edge.i, edge.j));
            const std::size_t hi = static_cast<std::size_t>(std::max(edge.i, edge.j));
            const double sw = std::sqrt(inc.W(e, e));
            for (std::size_t c = 0; c < p; ++c) {
                traj.zeta(sample, e * p + c) = sw * (z_all[lo * p + c] - z_all[hi * p + c]);
            }
        }
        double worst = 0.0;
        for (std::size_t a = 0; a < big_n; ++a) {
            for (std::size_t b = a + 1; b < big_n; ++b) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double d = x_part[a * n + k] - x_part[b * n + k];
                    s += d * d;
                }
                worst = std::max(worst, std::sqrt(s));
            }
        }
        traj.disagreement[sample] = worst;
    };

    record(0, 0.0);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), work(dim);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        rhs(t, state, k1);
        for (std::size_t i = 0; i < dim; ++i) work[i] = state[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, work, k2);
        for (std::size_t i = 0; i < dim; ++i) work[i] = state[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, work, k3);
        for (std::size_t i = 0; i < dim; ++i) work[i] = state[i] + h * k3[i];
        rhs(t + h, work, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        for (double v : state) {
            if (!(std::abs(v) <= 1e9)) {
                throw SolverFailure("simulate: state diverged (instability or bad dt)");
            }
        }
        record(s + 1, static_cast<double>(s + 1) * h);
    }
    return traj;
}

bool DisagreementProfile::tail_below(double threshold, double fraction) const {
    if (max_pair.empty()) return false;
    std::size_t count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(max_pair.size()))));
    count = std::min(count, max_pair.size());
    for (std::size_t k = max_pair.size() - count; k < max_pair.size(); ++k) {
        if (!(max_pair[k] < threshold)) return false;
    }
    return true;
}

DisagreementProfile disagreement_profile(const Trajectory& traj) {
    DisagreementProfile prof;
    prof.times = traj.times;
    prof.max_pair = traj.disagreement;
    prof.zeta_norm.resize(traj.samples());
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        double acc = 0.0;
        for (std::size_t k = 0; k < traj.zeta_dim; ++k) {
            acc += traj.zeta(s, k) * traj.zeta(s, k);
        }
        prof.zeta_norm[s] = std::sqrt(acc);
    }
    return prof;
}

void export_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "t";
    for (std::size_t a = 1; a <= traj.agents; ++a) {
        for (std::size_t c = 1; c <= traj.state_dim; ++c) out << ",x_" << a << "_" << c;
    }
    for (std::size_t a = 1; a <= traj.agents; ++a) {
        for (std::size_t c = 1; c <= traj.state_dim; ++c) out << ",w_" << a << "_" << c;
    }
    for (std::size_t a = 1; a <= traj.agents; ++a) {
        for (std::size_t c = 1; c <= traj.input_dim; ++c) out << ",u_" << a << "_" << c;
    }
    out << ",disagreement\n";
    out << std::setprecision(17);
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        out << traj.times[s];
        for (std::size_t k = 0; k < traj.agents * traj.state_dim; ++k) out << "," << traj.x(s, k);
        for (std::size_t k = 0; k < traj.agents * traj.state_dim; ++k) out << "," << traj.w(s, k);
        for (std::size_t k = 0; k < traj.agents * traj.input_dim; ++k) out << "," << traj.u(s, k);
        out << "," << traj.disagreement[s] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void emit_gnuplot(const Trajectory& traj, const std::string& script_path,
                  const std::string& csv_path) {
    std::ofstream out(script_path);
    if (!out) throw IoError("cannot open for writing: " + script_path);
    const std::size_t n = traj.state_dim;
    out << "set datafile separator ','\n";
    out << "set key outside\n";
    out << "set xlabel 't'\n";
    out << "set multiplot layout " << n << ",1\n";
    for (std::size_t c = 1; c <= n; ++c) {
        out << "set ylabel 'x_{i," << c << "}'\n";
        out << "plot ";
        for (std::size_t a = 1; a <= traj.agents; ++a) {
            const std::size_t col = 1 + (a - 1) * n + c;
            if (a > 1) out << ", ";
            out << "'" << csv_path << "' using 1:" << col
                << " with lines title 'x_" << a << "_" << c << "'";
        }
        out << "\n";
    }
    out << "unset multiplot\n";
    if (!out) throw IoError("write failed: " + script_path);
}

} // namespace h2net
