#pragma once

// Shared test utilities: deterministic instance generators, a dense
// vertex-enumeration oracle for small linear programs, and a runner that
// executes the installed CLI binary and captures both streams.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "episafe/model.hpp"
#include "episafe/rng.hpp"
#include "episafe/simplex.hpp"

namespace episafe::test {

inline Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

/// Uniformly random simple graph with m edges, drawn without replacement
/// from the full pair list. Kept separate from ensemble::gen_gnm so graph
/// generation bugs cannot mask themselves in tests that use it.
inline Graph random_graph(CounterRng& rng, int n, int m) {
    std::vector<Edge> all;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.push_back({u, v});
    rng.shuffle(all);
    all.resize(m);
    return Graph(n, std::move(all));
}

/// Attractive instance with J ~ U(0, 2) and h ~ U(-2, 0).
inline IsingModel random_attractive(CounterRng& rng, Graph graph) {
    std::vector<double> j(graph.edge_count());
    std::vector<double> h(graph.node_count());
    for (auto& x : j) x = rng.uniform(0.0, 2.0);
    for (auto& x : h) x = rng.uniform(-2.0, 0.0);
    return IsingModel(std::move(graph), std::move(j), std::move(h));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

/// Fresh path under the system temp dir; unique per call within a process.
inline std::string temp_path(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path();
    return (dir / ("episafe_" + tag + "_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter++)))
        .string();
}

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

/// Runs the CLI with the given arguments, capturing exit code and streams.
inline CliResult run_cli(const std::vector<std::string>& args) {
    const std::string out_path = temp_path("stdout");
    const std::string err_path = temp_path("stderr");
    std::string cmd = "'" EPISAFE_CLI_PATH "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " >'" + out_path + "' 2>'" + err_path + "'";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

inline std::string data_file(const std::string& name) {
    return std::string(EPISAFE_DATA_DIR) + "/" + name;
}

/// Reference LP solver by exhaustive vertex enumeration: every basic point
/// is the solution of n tight constraints chosen among rows and bounds.
/// Only for tiny instances; returns nullopt when infeasible.
inline std::optional<std::pair<double, std::vector<double>>> lp_vertex_oracle(
    const LpProblem& p) {
    const int n = p.num_vars;
    const int m = static_cast<int>(p.rows.size());

    // Tight set encoding: 0..m-1 rows, m + 2j lower bound j, m + 2j + 1 upper.
    std::vector<int> options;
    for (int i = 0; i < m; ++i) options.push_back(i);
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(p.lower[j])) options.push_back(m + 2 * j);
        if (std::isfinite(p.upper[j])) options.push_back(m + 2 * j + 1);
    }

    std::vector<double> dense(static_cast<size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (auto [j, c] : p.rows[i]) dense[static_cast<size_t>(i) * n + j] += c;

    auto fill_row = [&](int opt, std::vector<double>& row, double& rhs) {
        row.assign(n, 0.0);
        if (opt < m) {
            for (int j = 0; j < n; ++j) row[j] = dense[static_cast<size_t>(opt) * n + j];
            rhs = p.rhs[opt];
        } else {
            const int j = (opt - m) / 2;
            row[j] = 1.0;
            rhs = (opt - m) % 2 == 0 ? p.lower[j] : p.upper[j];
        }
    };

    std::optional<std::pair<double, std::vector<double>>> best;
    const int total = static_cast<int>(options.size());
    // Iterate over all n-subsets of the tight-set options.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    if (total < n) return best;
    while (true) {
        // Solve the n x n system for the candidate vertex.
        std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
        std::vector<double> b(n, 0.0);
        for (int r = 0; r < n; ++r) {
            std::vector<double> row;
            fill_row(options[idx[r]], row, b[r]);
            for (int j = 0; j < n; ++j) a[static_cast<size_t>(r) * n + j] = row[j];
        }
        // Gaussian elimination with partial pivoting.
        bool singular = false;
        std::vector<double> x(n, 0.0);
        {
            std::vector<double> aa = a;
            std::vector<double> bb = b;
            for (int col = 0; col < n && !singular; ++col) {
                int piv = col;
                for (int r = col + 1; r < n; ++r)
                    if (std::abs(aa[static_cast<size_t>(r) * n + col]) >
                        std::abs(aa[static_cast<size_t>(piv) * n + col]))
                        piv = r;
                if (std::abs(aa[static_cast<size_t>(piv) * n + col]) < 1e-11) {
                    singular = true;
                    break;
                }
                for (int j = 0; j < n; ++j)
                    std::swap(aa[static_cast<size_t>(col) * n + j],
                              aa[static_cast<size_t>(piv) * n + j]);
                std::swap(bb[col], bb[piv]);
                for (int r = col + 1; r < n; ++r) {
                    const double f = aa[static_cast<size_t>(r) * n + col] /
                                     aa[static_cast<size_t>(col) * n + col];
                    for (int j = col; j < n; ++j)
                        aa[static_cast<size_t>(r) * n + j] -=
                            f * aa[static_cast<size_t>(col) * n + j];
                    bb[r] -= f * bb[col];
                }
            }
            if (!singular) {
                for (int r = n - 1; r >= 0; --r) {
                    double s = bb[r];
                    for (int j = r + 1; j < n; ++j)
                        s -= aa[static_cast<size_t>(r) * n + j] * x[j];
                    x[r] = s / aa[static_cast<size_t>(r) * n + r];
                }
            }
        }
        if (!singular) {
            bool feasible = true;
            for (int j = 0; j < n && feasible; ++j)
                feasible = x[j] >= p.lower[j] - 1e-7 && x[j] <= p.upper[j] + 1e-7;
            for (int i = 0; i < m && feasible; ++i) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += dense[static_cast<size_t>(i) * n + j] * x[j];
                feasible = lhs <= p.rhs[i] + 1e-7;
            }
            if (feasible) {
                double obj = 0.0;
                for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
                if (!best || obj < best->first) best = {obj, x};
            }
        }
        // Next combination.
        int pos = n - 1;
        while (pos >= 0 && idx[pos] == total - n + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int r = pos + 1; r < n; ++r) idx[r] = idx[r - 1] + 1;
    }
    return best;
}

}  // namespace episafe::test
