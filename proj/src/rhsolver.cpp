#include "rhkit/rhsolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <map>

namespace rhkit {

namespace {

double problem_scale(const RHProblem& p) {
    double s = 0.0;
    for (const auto& l : p.legs) {
        s = std::max(s, l.map.length());
        s = std::max(s, std::abs(l.map.a));
        s = std::max(s, std::abs(l.map.b));
    }
    return s > 0.0 ? s : 1.0;
}

double point_segment_distance(cx z, cx a, cx b) {
    cx d = b - a;
    double L2 = std::norm(d);
    double t = ((z - a) * std::conj(d)).real() / L2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

Mat2 limit_jump(const RHProblem& p, const JunctionInfo::Incident& inc, cx zeta) {
    return p.jump(inc.leg, zeta);
}

}  // namespace

std::vector<JunctionInfo> find_junctions(const RHProblem& p) {
    double tol = 1e-12 * problem_scale(p);
    std::vector<JunctionInfo> out;
    for (int i = 0; i < int(p.legs.size()); ++i) {
        const auto& leg = p.legs[i];
        for (Endpoint ep : {Endpoint::left, Endpoint::right}) {
            cx z = ep == Endpoint::left ? leg.map.a : leg.map.b;
            double theta = ep == Endpoint::left ? leg.map.angle()
                                                : reduce_angle(leg.map.angle() + pi);
            JunctionInfo* home = nullptr;
            for (auto& j : out)
                if (std::abs(j.point - z) <= tol) {
                    home = &j;
                    break;
                }
            if (!home) {
                out.push_back(JunctionInfo{z, {}, false});
                home = &out.back();
            }
            home->incident.push_back({i, ep, theta});
        }
    }
    for (auto& j : out)
        std::sort(j.incident.begin(), j.incident.end(),
                  [](const auto& a, const auto& b) { return a.theta < b.theta; });
    return out;
}

void check_junction_consistency(const RHProblem& p, std::vector<JunctionInfo>& junctions) {
    for (auto& j : junctions) {
        int L = int(j.incident.size());
        // counterclockwise crossing factors: G for outgoing legs, G^{-1} for incoming
        std::vector<Mat2> Ghat(L);
        for (int i = 0; i < L; ++i) {
            Mat2 G = limit_jump(p, j.incident[i], j.point);
            Ghat[i] = (j.incident[i].ep == Endpoint::left) ? G : G.inverse();
        }
        // the cyclic condition constrains junctions where several legs meet;
        // free tips left by truncation carry ||G - I|| at the cut tolerance
        if (L >= 2) {
            Mat2 prod = Mat2::identity();
            for (int i = 0; i < L; ++i) prod = prod * Ghat[i];
            double scale = 1.0;
            for (auto& g : Ghat) scale = std::max(scale, g.norm());
            if ((prod - Mat2::identity()).norm() > 1e-10 * scale * scale)
                throw std::runtime_error("RH problem: cyclic jump product != I at a junction");
        }

        // junction matrix (theta_1 + 2pi - theta_L) I + sum (theta_i - theta_{i-1}) Ghat_i..Ghat_L
        Mat2 MJ = (j.incident.front().theta + 2.0 * pi - j.incident.back().theta) *
                  Mat2::identity();
        Mat2 suffix = Mat2::identity();
        for (int i = L - 1; i >= 1; --i) {
            suffix = Ghat[i] * suffix;
            MJ += (j.incident[i].theta - j.incident[i - 1].theta) * suffix;
        }
        double sc = 2.0 * pi;
        for (auto& g : Ghat) sc = std::max(sc, 2.0 * pi * g.norm());
        if (std::abs(MJ.det()) <= 1e-10 * sc * sc) j.use_zero_sum_row = true;
    }
}

CollocationSystem build_system(const RHProblem& p, const std::vector<int>& nodes) {
    const int L = int(p.legs.size());
    if (int(nodes.size()) != L) throw std::invalid_argument("build_system: node count mismatch");

    CollocationSystem sys;
    sys.node_count = nodes;
    sys.junctions = find_junctions(p);
    check_junction_consistency(p, sys.junctions);
    for (const auto& j : sys.junctions)
        if (j.use_zero_sum_row) ++sys.fallback_junctions;

    int N = 0;
    std::vector<int> offset(L);
    for (int i = 0; i < L; ++i) {
        offset[i] = N;
        N += nodes[i];
    }
    sys.N = N;
    sys.nodes.resize(L);
    for (int i = 0; i < L; ++i) sys.nodes[i] = cheb_points(nodes[i], p.legs[i].map);

    // jump matrices minus identity at every node
    std::vector<std::vector<Mat2>> GmI(L);
    for (int i = 0; i < L; ++i) {
        GmI[i].resize(nodes[i]);
        for (int l = 0; l < nodes[i]; ++l) {
            Mat2 G = p.jump(i, sys.nodes[i][l]);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    if (!std::isfinite(G.at(r, c).real()) || !std::isfinite(G.at(r, c).imag()))
                        throw std::runtime_error("build_system: jump not finite at a node");
            GmI[i][l] = G - Mat2::identity();
        }
    }

    std::map<int, std::vector<std::vector<double>>> dct_cache;
    auto dct_for = [&](int m) -> const std::vector<std::vector<double>>& {
        auto it = dct_cache.find(m);
        if (it == dct_cache.end()) it = dct_cache.emplace(m, dct_matrix(m)).first;
        return it->second;
    };

    const int dim = 2 * N;
    sys.A.assign(size_t(dim) * dim, cx{});
    sys.rhs_row1.assign(dim, cx{});
    sys.rhs_row2.assign(dim, cx{});
    auto A_at = [&](int r, int c) -> cx& { return sys.A[size_t(r) * dim + c]; };

    double scale = problem_scale(p);

    for (int i = 0; i < L; ++i) {
        const auto& pts = sys.nodes[i];
        for (int l = 0; l < nodes[i]; ++l) {
            int row_node = offset[i] + l;
            cx z = pts[l];
            bool is_left = (l == 0);
            bool is_right = (l == nodes[i] - 1);
            bool at_junction = is_left || is_right;
            double theta_row = is_left ? p.legs[i].map.angle()
                                       : reduce_angle(p.legs[i].map.angle() + pi);

            // identity part
            for (int q = 0; q < 2; ++q) A_at(2 * row_node + q, 2 * row_node + q) += 1.0;

            // minus [C^- U](z_row) (G(z_row) - I), leg by leg
            const Mat2& B = GmI[i][l];
            for (int jl = 0; jl < L; ++jl) {
                int mj = nodes[jl];
                BasisPointQuery q;
                if (jl == i && !at_junction) {
                    q.z = z;
                    q.on_leg = true;
                    q.side = Side::minus;
                } else if (at_junction) {
                    cx zeta = z;
                    bool at_a = std::abs(p.legs[jl].map.a - zeta) <= 1e-12 * scale;
                    bool at_b = std::abs(p.legs[jl].map.b - zeta) <= 1e-12 * scale;
                    if (at_a || at_b) {
                        q.at_endpoint = true;
                        q.ep = at_a ? Endpoint::left : Endpoint::right;
                        q.theta = theta_row;
                        q.side = Side::minus;
                        q.z = zeta;
                    } else {
                        q.z = zeta;
                    }
                } else {
                    q.z = z;
                }
                auto BV = cauchy_basis_all(mj, p.legs[jl].map, q);
                const auto& D = dct_for(mj);
                for (int lp = 0; lp < mj; ++lp) {
                    cx K{};
                    for (int k = 0; k < mj; ++k) K += BV[k] * D[k][lp];
                    if (K == cx{}) continue;
                    int col_node = offset[jl] + lp;
                    // coefficient of V[p,s] in the (p,q) equation is K (G_row - I)[s,q]
                    for (int qq = 0; qq < 2; ++qq)
                        for (int s = 0; s < 2; ++s)
                            A_at(2 * row_node + qq, 2 * col_node + s) -= K * B.at(s, qq);
                }
            }

            sys.rhs_row1[2 * row_node + 0] = GmI[i][l].a11;
            sys.rhs_row1[2 * row_node + 1] = GmI[i][l].a12;
            sys.rhs_row2[2 * row_node + 0] = GmI[i][l].a21;
            sys.rhs_row2[2 * row_node + 1] = GmI[i][l].a22;
        }
    }

    // nonsingular-junction fallback: replace the highest-angle incident copy's
    // rows with the explicit zero-sum rows
    for (const auto& j : sys.junctions) {
        if (!j.use_zero_sum_row) continue;
        const auto& inc = j.incident.back();
        int l = inc.ep == Endpoint::left ? 0 : nodes[inc.leg] - 1;
        int row_node = offset[inc.leg] + l;
        for (int qq = 0; qq < 2; ++qq) {
            int r = 2 * row_node + qq;
            for (int c = 0; c < dim; ++c) A_at(r, c) = cx{};
            sys.rhs_row1[r] = cx{};
            sys.rhs_row2[r] = cx{};
        }
        for (const auto& in2 : j.incident) {
            double pSign = in2.ep == Endpoint::right ? 1.0 : -1.0;
            int l2 = in2.ep == Endpoint::left ? 0 : nodes[in2.leg] - 1;
            int col_node = offset[in2.leg] + l2;
            for (int qq = 0; qq < 2; ++qq) A_at(2 * row_node + qq, 2 * col_node + qq) += pSign;
        }
    }

    return sys;
}

namespace {

RHSolution assemble_solution(const RHProblem& p, const CollocationSystem& sys,
                             const Eigen::VectorXcd& x1, const Eigen::VectorXcd& x2,
                             SolveDiagnostics diag) {
    RHSolution sol;
    sol.legs = p.legs;
    sol.junctions = sys.junctions;
    sol.diag = diag;
    int off = 0;
    for (size_t i = 0; i < p.legs.size(); ++i) {
        int m = sys.node_count[i];
        std::vector<Mat2> vals(m);
        for (int l = 0; l < m; ++l) {
            int node = off + l;
            vals[l] = Mat2{x1(2 * node + 0), x1(2 * node + 1), x2(2 * node + 0),
                           x2(2 * node + 1)};
        }
        sol.U.push_back(cheb_transform(vals, p.legs[i].map));
        off += m;
    }
    return sol;
}

}  // namespace

RHSolution solve(const RHProblem& p, const std::vector<int>& nodes) {
    CollocationSystem sys = build_system(p, nodes);
    const int dim = 2 * sys.N;
    Eigen::MatrixXcd A(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) A(r, c) = sys.A[size_t(r) * dim + c];
    Eigen::VectorXcd b1(dim), b2(dim);
    for (int r = 0; r < dim; ++r) {
        b1(r) = sys.rhs_row1[r];
        b2(r) = sys.rhs_row2[r];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    SolveDiagnostics diag;
    diag.rcond = lu.rcond();
    diag.fallback_junctions = sys.fallback_junctions;
    if (diag.rcond < 1e-15)
        throw std::runtime_error("collocation system numerically singular (rcond " +
                                 std::to_string(diag.rcond) + ")");
    diag.condition_warning = diag.rcond < 1e-12;
    Eigen::VectorXcd x1 = lu.solve(b1), x2 = lu.solve(b2);
    return assemble_solution(p, sys, x1, x2, diag);
}

RHSolution solve(const RHProblem& p, int nodes_per_leg) {
    return solve(p, std::vector<int>(p.legs.size(), nodes_per_leg));
}

Mat2 RHSolution::evaluate(cx z, Side side) const {
    Mat2 acc = Mat2::identity();
    double scale = 1.0;
    for (const auto& l : legs) scale = std::max(scale, l.map.length());
    for (size_t j = 0; j < legs.size(); ++j) {
        const auto& map = legs[j].map;
        int m = int(U[j].coeffs.size());
        BasisPointQuery q;
        q.z = z;
        double d = point_segment_distance(z, map.a, map.b);
        if (d < 1e-12 * scale) {
            if (std::abs(z - map.a) < 1e-12 * scale || std::abs(z - map.b) < 1e-12 * scale) {
                q.at_endpoint = true;
                q.ep = std::abs(z - map.a) < 1e-12 * scale ? Endpoint::left : Endpoint::right;
                q.theta = reduce_angle(map.angle() + (side == Side::plus ? 0.5 : -0.5) * pi);
                q.side = side;
            } else {
                q.on_leg = true;
                q.side = side;
            }
        }
        auto BV = cauchy_basis_all(m, map, q);
        for (int k = 0; k < m; ++k) acc += U[j].coeffs[k] * BV[k];
    }
    return acc;
}

Mat2 RHSolution::first_moment() const {
    Mat2 acc;
    for (size_t j = 0; j < legs.size(); ++j) {
        cx half = 0.5 * (legs[j].map.b - legs[j].map.a);
        for (size_t k = 0; k < U[j].coeffs.size(); ++k)
            acc += (half * chebT_integral(int(k))) * U[j].coeffs[k];
    }
    return acc * (-1.0 / (2.0 * pi * I_unit));
}

std::vector<double> RHSolution::zero_sum_residuals() const {
    std::vector<double> out;
    for (const auto& j : junctions) {
        Mat2 s;
        for (const auto& inc : j.incident) {
            double pSign = inc.ep == Endpoint::right ? 1.0 : -1.0;
            s += pSign * U[inc.leg].endpoint_value(inc.ep == Endpoint::right);
        }
        out.push_back(s.norm());
    }
    return out;
}

double cauchy_error(const RHProblem& p, int m) {
    RHSolution s1 = solve(p, m);
    RHSolution s2 = solve(p, 2 * m);
    double err = 0.0;
    for (size_t j = 0; j < p.legs.size(); ++j) {
        auto pts = cheb_points(2 * m, p.legs[j].map);
        for (size_t l = 0; l < pts.size(); ++l) {
            Mat2 a = s1.U[j].eval(pts[l]);
            Mat2 b = s2.U[j].eval(pts[l]);
            err = std::max(err, (a - b).norm());
        }
    }
    return err;
}

RHSolution solve_adaptive(const RHProblem& p, int m0, double tol, int m_max, int* m_used) {
    int m = m0;
    while (true) {
        RHSolution s1 = solve(p, m);
        RHSolution s2 = solve(p, 2 * m);
        double err = 0.0;
        for (size_t j = 0; j < p.legs.size(); ++j) {
            auto pts = cheb_points(2 * m, p.legs[j].map);
            for (size_t l = 0; l < pts.size(); ++l)
                err = std::max(err, (s1.U[j].eval(pts[l]) - s2.U[j].eval(pts[l])).norm());
        }
        if (err < tol || m >= m_max) {
            if (m_used) *m_used = m;
            return s2;
        }
        m *= 2;
    }
}

RHProblem truncate(const RHProblem& p, double tol) {
    if (tol <= 0.0) return p;
    RHProblem out;
    std::vector<int> keep_index;
    const int grid = 64;
    for (int i = 0; i < int(p.legs.size()); ++i) {
        const auto& map = p.legs[i].map;
        auto normGmI = [&](double t) {
            return (p.jump(i, map.inverse(cx{t})) - Mat2::identity()).norm();
        };
        std::vector<double> ts(grid + 1), vs(grid + 1);
        bool any = false;
        for (int g = 0; g <= grid; ++g) {
            ts[g] = -1.0 + 2.0 * g / grid;
            vs[g] = normGmI(ts[g]);
            if (vs[g] >= tol) any = true;
        }
        if (!any) continue;  // whole leg dropped
        int lo = 0, hi = grid;
        while (vs[lo] < tol) ++lo;
        while (vs[hi] < tol) --hi;
        double tlo = ts[lo], thi = ts[hi];
        if (lo > 0) {
            double a = ts[lo - 1], b = ts[lo];
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (a + b);
                (normGmI(mid) < tol ? a : b) = mid;
            }
            tlo = a;
        }
        if (hi < grid) {
            double a = ts[hi], b = ts[hi + 1];
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (a + b);
                (normGmI(mid) < tol ? b : a) = mid;
            }
            thi = b;
        }
        ContourLeg leg;
        leg.map = IntervalMap{map.inverse(cx{tlo}), map.inverse(cx{thi})};
        out.legs.push_back(leg);
        keep_index.push_back(i);
    }
    JumpFn base = p.jump;
    out.jump = [base, keep_index](int leg, cx z) { return base(keep_index[leg], z); };
    return out;
}

Mat2 CompositeSolution::evaluate(cx z, Side side) const {
    // stages compose in reverse: Phi = Phi_l ... Phi_2 Phi_1
    Mat2 acc = Mat2::identity();
    for (const auto& st : stages) acc = st.local.evaluate((z - st.beta) / st.alpha, side) * acc;
    return acc;
}

Mat2 CompositeSolution::first_moment() const {
    Mat2 acc;
    for (const auto& st : stages) acc += st.alpha * st.local.first_moment();
    return acc;
}

namespace {

RHProblem to_local(const ScaledPiece& piece) {
    RHProblem local;
    cx alpha = piece.alpha, beta = piece.beta;
    for (const auto& leg : piece.problem.legs) {
        ContourLeg l;
        l.map = IntervalMap{(leg.map.a - beta) / alpha, (leg.map.b - beta) / alpha};
        local.legs.push_back(l);
    }
    JumpFn base = piece.problem.jump;
    local.jump = [base, alpha, beta](int leg, cx k) { return base(leg, alpha * k + beta); };
    return local;
}

}  // namespace

CompositeSolution scaled_solve(const std::vector<ScaledPiece>& pieces, int nodes_per_leg) {
    CompositeSolution out;
    for (size_t j = 0; j < pieces.size(); ++j) {
        RHProblem local = to_local(pieces[j]);
        if (j > 0) {
            JumpFn base = local.jump;
            CompositeSolution prefix = out;
            cx alpha = pieces[j].alpha, beta = pieces[j].beta;
            local.jump = [base, prefix, alpha, beta](int leg, cx k) {
                cx z = alpha * k + beta;
                Mat2 W = prefix.evaluate(z);
                return W * base(leg, k) * W.inverse();
            };
        }
        CompositeSolution::Stage st{solve(local, nodes_per_leg), pieces[j].alpha,
                                    pieces[j].beta};
        out.stages.push_back(std::move(st));
    }
    return out;
}

CompositeSolution scaled_solve_adaptive(const std::vector<ScaledPiece>& pieces, int m0, double tol,
                                        int m_max, int* m_used) {
    int m = m0;
    while (true) {
        CompositeSolution s1 = scaled_solve(pieces, m);
        CompositeSolution s2 = scaled_solve(pieces, 2 * m);
        double err = 0.0;
        for (size_t j = 0; j < s1.stages.size(); ++j) {
            for (size_t lg = 0; lg < s1.stages[j].local.legs.size(); ++lg) {
                auto pts = cheb_points(2 * m, s1.stages[j].local.legs[lg].map);
                for (auto& z : pts)
                    err = std::max(err, (s1.stages[j].local.U[lg].eval(z) -
                                         s2.stages[j].local.U[lg].eval(z))
                                            .norm());
            }
        }
        if (err < tol || m >= m_max) {
            if (m_used) *m_used = m;
            return s2;
        }
        m *= 2;
    }
}

std::vector<ScaledPiece> split_into_pieces(const RHProblem& p) {
    int L = int(p.legs.size());
    double tol = 1e-12 * problem_scale(p);
    std::vector<int> parent(L);
    for (int i = 0; i < L; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j)
            for (cx a : {p.legs[i].map.a, p.legs[i].map.b})
                for (cx b : {p.legs[j].map.a, p.legs[j].map.b})
                    if (std::abs(a - b) <= tol) parent[find(i)] = find(j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < L; ++i) groups[find(i)].push_back(i);

    std::vector<ScaledPiece> out;
    for (auto& [root, members] : groups) {
        ScaledPiece piece;
        cx centroid{};
        double radius = 0.0;
        for (int i : members) centroid += 0.5 * (p.legs[i].map.a + p.legs[i].map.b);
        centroid /= double(members.size());
        for (int i : members) {
            radius = std::max(radius, std::abs(p.legs[i].map.a - centroid));
            radius = std::max(radius, std::abs(p.legs[i].map.b - centroid));
        }
        piece.alpha = radius > 0.0 ? cx{radius} : cx{1.0};
        piece.beta = centroid;
        JumpFn base = p.jump;
        std::vector<int> mem = members;
        for (int i : members) piece.problem.legs.push_back(p.legs[i]);
        piece.problem.jump = [base, mem](int leg, cx z) { return base(mem[leg], z); };
        out.push_back(std::move(piece));
    }
    std::sort(out.begin(), out.end(), [](const ScaledPiece& a, const ScaledPiece& b) {
        return a.beta.real() < b.beta.real();
    });
    return out;
}

void CollocationSystem::dump_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    int dim = 2 * N;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            cx v = A[size_t(r) * dim + c];
            std::fprintf(f, "%.17g%+.17gi%s", v.real(), v.imag(), c + 1 < dim ? "," : "");
        }
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

}  // namespace rhkit
