#include "episafe/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace episafe {

MaxFlow::MaxFlow(int node_count, int source, int sink)
    : n_(node_count), source_(source), sink_(sink), head_(node_count) {
    if (source < 0 || sink < 0 || source >= node_count || sink >= node_count || source == sink)
        throw std::invalid_argument("bad source/sink");
}

void MaxFlow::add_edge(int u, int v, double cap, double rev_cap) {
    if (cap < 0.0 || rev_cap < 0.0) throw std::invalid_argument("negative capacity");
    Arc fwd{v, static_cast<int>(head_[v].size()), cap};
    Arc bwd{u, static_cast<int>(head_[u].size()), rev_cap};
    head_[u].push_back(fwd);
    head_[v].push_back(bwd);
}

bool MaxFlow::bfs_levels() {
    level_.assign(n_, -1);
    std::queue<int> q;
    level_[source_] = 0;
    q.push(source_);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const Arc& a : head_[v]) {
            if (a.cap > kEps && level_[a.to] < 0) {
                level_[a.to] = level_[v] + 1;
                q.push(a.to);
            }
        }
    }
    return level_[sink_] >= 0;
}

double MaxFlow::push(int v, double limit) {
    if (v == sink_) return limit;
    for (int& i = iter_[v]; i < static_cast<int>(head_[v].size()); ++i) {
        Arc& a = head_[v][i];
        if (a.cap > kEps && level_[a.to] == level_[v] + 1) {
            double got = push(a.to, std::min(limit, a.cap));
            if (got > 0.0) {
                a.cap -= got;
                head_[a.to][a.rev].cap += got;
                return got;
            }
            level_[a.to] = -1;  // dead end this phase
        }
    }
    return 0.0;
}

double MaxFlow::solve() {
    double total = 0.0;
    while (bfs_levels()) {
        iter_.assign(n_, 0);
        while (true) {
            double got = push(source_, std::numeric_limits<double>::infinity());
            if (got <= 0.0) break;
            total += got;
        }
    }
    return total;
}

std::vector<char> MaxFlow::min_cut_source_side() const {
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    seen[source_] = 1;
    q.push(source_);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const Arc& a : head_[v]) {
            if (a.cap > kEps && !seen[a.to]) {
                seen[a.to] = 1;
                q.push(a.to);
            }
        }
    }
    return seen;
}

std::vector<char> MaxFlow::residual_reaches_sink() const {
    // Backward search along residual arcs into the sink.
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    seen[sink_] = 1;
    q.push(sink_);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const Arc& a : head_[v]) {
            // The reverse of arc a is head_[a.to][a.rev]; it points back to v.
            const Arc& rev = head_[a.to][a.rev];
            if (rev.cap > kEps && !seen[a.to]) {
                seen[a.to] = 1;
                q.push(a.to);
            }
        }
    }
    return seen;
}

}  // namespace episafe
