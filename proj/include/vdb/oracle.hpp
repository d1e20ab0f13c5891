#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vdb/errors.hpp"
#include "vdb/graph.hpp"
#include "vdb/graph_io.hpp"
#include "vdb/property.hpp"
#include "vdb/weights.hpp"

namespace vdb {

enum class CollectMode { min_profiles, histogram, lemma_predicates };

inline const char* collect_mode_name(CollectMode c) {
    switch (c) {
        case CollectMode::min_profiles:     return "min_profiles";
        case CollectMode::histogram:        return "histogram";
        case CollectMode::lemma_predicates: return "lemma_predicates";
    }
    return "unknown";
}

/// A class of labeled connected graphs to search exhaustively: fixed n and
/// m, optional degree bounds, a weight to minimize and what to retain.
struct EnumerationSpec {
    static constexpr int max_n = 16;

    int n = 0;
    int m = 0;
    std::optional<int> max_degree;
    std::optional<int> min_degree;
    WeightFunction weight = WeightFunction::sombor();
    CollectMode collect = CollectMode::min_profiles;

    void validate() const {
        if (n < 1) fail(errc::infeasible, "need n >= 1");
        if (n > max_n)
            fail(errc::cap_exceeded,
                 "enumeration capped at n = " + std::to_string(max_n));
        const long pairs = static_cast<long>(n) * (n - 1) / 2;
        if (m < 0 || m > pairs)
            fail(errc::infeasible, "m = " + std::to_string(m) + " outside 0.." +
                                       std::to_string(pairs));
        if (n >= 2 && m < n - 1)
            fail(errc::infeasible, "no connected graph with m < n-1");
        if (max_degree && (2L * m > static_cast<long>(n) * *max_degree))
            fail(errc::infeasible, "2m exceeds n * max_degree");
        if (min_degree && (2L * m < static_cast<long>(n) * *min_degree))
            fail(errc::infeasible, "2m below n * min_degree");
        if (max_degree && min_degree && *min_degree > *max_degree)
            fail(errc::infeasible, "min_degree above max_degree");
    }

    nlohmann::json to_json_value() const {
        nlohmann::json j{{"n", n},
                         {"m", m},
                         {"weight", weight.id_json()},
                         {"collect", collect_mode_name(collect)}};
        j["max_degree"] = max_degree ? nlohmann::json(*max_degree) : nlohmann::json();
        j["min_degree"] = min_degree ? nlohmann::json(*min_degree) : nlohmann::json();
        return j;
    }
};

struct MinimizerProfile {
    DegreeProfile degrees;
    EdgeClassCounts classes;
    double ti = 0.0;  // least value observed for this profile
    std::uint64_t count = 0;
    std::string example_graph6;
};

struct SearchResult {
    double min_value = std::numeric_limits<double>::quiet_NaN();
    std::vector<MinimizerProfile> minimizer_profiles;
    std::string example_minimizer;
    std::uint64_t graphs_visited = 0;

    // lemma_predicates mode
    std::uint64_t lemma_checked = 0;
    std::vector<std::string> lemma_violations;

    // histogram mode; keys are llround(value * 1e9)
    std::map<long long, std::uint64_t> histogram;

    double elapsed_seconds = 0.0;
    int subtree_count = 0;
};

struct OracleOptions {
    int workers = 0;  // 0: hardware concurrency
    std::string checkpoint_path;
    std::uint64_t checkpoint_leaf_interval = 100'000'000;
    int min_subtrees = 64;
};

namespace detail {

constexpr double kMinSlack = 1e-9;
constexpr std::size_t kMaxViolationWitnesses = 100;

/// Branch-and-prune search over the candidate-edge list: each edge is
/// decided present or absent in order, with pruning by remaining-edge
/// count, the degree cap, min-degree feasibility (a vertex whose undecided
/// incident edges cannot reach the floor), a global degree-deficit bound,
/// a degree-capacity bound, frozen components (a component with no
/// undecided incident edges left cannot ever rejoin), and the union-find
/// component bound (components - 1 <= edges still to place). Connectivity
/// is O(1) at leaves via the same union-find. Labeled enumeration is sound
/// for minimum values because the index is relabeling-invariant.
class EnumEngine {
public:
    EnumEngine(const EnumerationSpec& spec, const std::vector<std::pair<int, int>>& order)
        : n_(spec.n),
          m_(spec.m),
          edge_count_(static_cast<int>(order.size())),
          cap_(spec.max_degree ? *spec.max_degree : n_ - 1),
          dmin_(spec.min_degree ? *spec.min_degree : 0),
          mode_(spec.collect) {
        dmin_eff_ = std::max(dmin_, n_ >= 2 ? 1 : 0);
        for (int t = 0; t < edge_count_; ++t) {
            eu_[t] = static_cast<std::uint8_t>(order[static_cast<std::size_t>(t)].first);
            ev_[t] = static_cast<std::uint8_t>(order[static_cast<std::size_t>(t)].second);
        }
        const int dmax = std::min(cap_, n_ - 1);
        for (int i = 1; i <= dmax; ++i)
            for (int j = 1; j <= dmax; ++j)
                weight_table_[i][j] = spec.weight.eval(i, j);
        reset();
    }

    void reset() {
        for (int v = 0; v < n_; ++v) {
            deg_[v] = 0;
            rem_[v] = 0;
            parent_[v] = -1;
            comp_size_[v] = 1;
        }
        for (int t = 0; t < edge_count_; ++t) {
            ++rem_[eu_[t]];
            ++rem_[ev_[t]];
        }
        for (int v = 0; v < n_; ++v) live_[v] = rem_[v] > 0 ? 1 : 0;
        comp_ = n_;
        chosen_ = 0;
        undo_len_ = 0;
        deficit_ = n_ * dmin_eff_;
        capslack_ = 0;
        for (int v = 0; v < n_; ++v)
            capslack_ += std::min(cap_, static_cast<int>(rem_[v]));
        local_min_ = std::numeric_limits<double>::infinity();
        visited_ = 0;
        lemma_checked_ = 0;
        profiles_.clear();
        violations_.clear();
        histogram_.clear();
        example_.clear();
    }

    /// Applies one decision with full prune checks; returns false (state
    /// unchanged) if the branch is infeasible.
    bool try_decide(int t, bool present) {
        const int u = eu_[t], v = ev_[t];
        if (present) {
            if (chosen_ >= m_ || deg_[u] >= cap_ || deg_[v] >= cap_) return false;
            apply_present(t);
            const int need = m_ - chosen_;
            if (comp_ - 1 > need || deficit_ > 2 * need || capslack_ < 2 * need ||
                frozen_after(u, v)) {
                undo_present(t);
                return false;
            }
            return true;
        }
        const int need = m_ - chosen_;
        if (edge_count_ - t - 1 < need) return false;
        apply_absent(t);
        if (deg_[u] + rem_[u] < dmin_eff_ || deg_[v] + rem_[v] < dmin_eff_ ||
            capslack_ < 2 * need || frozen_after(u) || frozen_after(v)) {
            undo_absent(t);
            return false;
        }
        return true;
    }

    void undo_decide(int t, bool present) {
        if (present)
            undo_present(t);
        else
            undo_absent(t);
    }

    /// Exhausts the subtree below edge index t (with chosen edges so far c).
    void run(int t, int c) {
        if (c == m_) {
            handle_leaf();
            return;
        }
        const int u = eu_[t], v = ev_[t];
        const int need = m_ - c;
        if (deg_[u] < cap_ && deg_[v] < cap_) {
            const int dd = (deg_[u] < dmin_eff_) + (deg_[v] < dmin_eff_);
            deficit_ -= dd;
            ++deg_[u];
            ++deg_[v];
            drop_rem(u);
            drop_rem(v);
            capslack_ -= 2;
            pe_a_[c] = static_cast<std::uint8_t>(u);
            pe_b_[c] = static_cast<std::uint8_t>(v);
            chosen_ = c + 1;
            unite(u, v);
            if (comp_ - 1 <= need - 1 && deficit_ <= 2 * (need - 1) &&
                capslack_ >= 2 * (need - 1) && !frozen_after(u, v))
                run(t + 1, c + 1);
            un_unite();
            chosen_ = c;
            capslack_ += 2;
            raise_rem(v);
            raise_rem(u);
            --deg_[u];
            --deg_[v];
            deficit_ += dd;
        }
        if (edge_count_ - t - 1 >= need) {
            const int drop = (rem_[u] <= cap_ - deg_[u]) + (rem_[v] <= cap_ - deg_[v]);
            drop_rem(u);
            drop_rem(v);
            capslack_ -= drop;
            if (deg_[u] + rem_[u] >= dmin_eff_ && deg_[v] + rem_[v] >= dmin_eff_ &&
                capslack_ >= 2 * need && !frozen_after(u) && !frozen_after(v))
                run(t + 1, c);
            capslack_ += drop;
            raise_rem(v);
            raise_rem(u);
        }
    }

    int chosen() const { return chosen_; }
    std::uint64_t visited() const { return visited_; }
    std::uint64_t lemma_checked() const { return lemma_checked_; }
    double local_min() const { return local_min_; }
    const std::string& example() const { return example_; }
    const std::map<std::string, MinimizerProfile>& profiles() const { return profiles_; }
    const std::vector<std::string>& violations() const { return violations_; }
    const std::map<long long, std::uint64_t>& histogram() const { return histogram_; }

private:
    void apply_present(int t) {
        const int u = eu_[t], v = ev_[t];
        if (deg_[u] < dmin_eff_) --deficit_;
        if (deg_[v] < dmin_eff_) --deficit_;
        ++deg_[u];
        ++deg_[v];
        drop_rem(u);
        drop_rem(v);
        capslack_ -= 2;
        pe_a_[chosen_] = static_cast<std::uint8_t>(u);
        pe_b_[chosen_] = static_cast<std::uint8_t>(v);
        ++chosen_;
        unite(u, v);
    }

    void undo_present(int t) {
        const int u = eu_[t], v = ev_[t];
        un_unite();
        --chosen_;
        capslack_ += 2;
        raise_rem(v);
        raise_rem(u);
        --deg_[u];
        --deg_[v];
        if (deg_[u] < dmin_eff_) ++deficit_;
        if (deg_[v] < dmin_eff_) ++deficit_;
    }

    void apply_absent(int t) {
        const int u = eu_[t], v = ev_[t];
        // capacity headroom min(cap - deg, rem) shrinks only if rem binds
        slack_drop_[t] = 0;
        if (rem_[u] <= cap_ - deg_[u]) ++slack_drop_[t];
        if (rem_[v] <= cap_ - deg_[v]) ++slack_drop_[t];
        drop_rem(u);
        drop_rem(v);
        capslack_ -= slack_drop_[t];
    }

    void undo_absent(int t) {
        const int u = eu_[t], v = ev_[t];
        capslack_ += slack_drop_[t];
        raise_rem(v);
        raise_rem(u);
    }

    int find(int x) const {
        while (parent_[x] >= 0) x = parent_[x];
        return x;
    }

    // live_[root] counts component members that still have undecided
    // incident edges; a multi-component state with a dead component can
    // never become connected. Each vertex crosses rem 1 -> 0 at most once
    // per root-to-leaf path, so these find calls are amortized out.
    void drop_rem(int v) {
        if (--rem_[v] == 0) --live_[find(v)];
    }

    void raise_rem(int v) {
        if (++rem_[v] == 1) ++live_[find(v)];
    }

    bool frozen_after(int u) {
        return comp_ > 1 && rem_[u] == 0 && live_[find(u)] == 0;
    }

    bool frozen_after(int u, int v) {
        return comp_ > 1 && rem_[u] == 0 && rem_[v] == 0 && live_[find(u)] == 0;
    }

    void unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) {
            undo_log_[undo_len_++] = {-1, -1, 0, 0};
            return;
        }
        if (comp_size_[ra] < comp_size_[rb]) std::swap(ra, rb);
        undo_log_[undo_len_++] = {static_cast<std::int8_t>(ra), static_cast<std::int8_t>(rb),
                                  comp_size_[ra], live_[ra]};
        parent_[rb] = static_cast<std::int8_t>(ra);
        comp_size_[ra] = static_cast<std::uint8_t>(comp_size_[ra] + comp_size_[rb]);
        live_[ra] = static_cast<std::uint8_t>(live_[ra] + live_[rb]);
        --comp_;
    }

    void un_unite() {
        const UndoEntry e = undo_log_[--undo_len_];
        if (e.big < 0) return;
        parent_[e.small] = -1;
        comp_size_[e.big] = e.size;
        live_[e.big] = e.live;
        ++comp_;
    }

    void handle_leaf() {
        if (comp_ != 1 || deficit_ != 0) return;
        ++visited_;
        switch (mode_) {
            case CollectMode::min_profiles: {
                const double ti = leaf_value();
                if (ti < local_min_ - kMinSlack) {
                    local_min_ = ti;
                    profiles_.clear();
                    example_ = leaf_graph6();
                    record_profile(ti);
                } else if (ti <= local_min_ + kMinSlack) {
                    local_min_ = std::min(local_min_, ti);
                    record_profile(ti);
                }
                break;
            }
            case CollectMode::histogram:
                ++histogram_[std::llround(leaf_value() * 1e9)];
                break;
            case CollectMode::lemma_predicates: {
                int dmax = 0, n2 = 0;
                for (int v = 0; v < n_; ++v) {
                    dmax = std::max(dmax, static_cast<int>(deg_[v]));
                    if (deg_[v] == 2) ++n2;
                }
                if (dmax < 4) break;
                ++lemma_checked_;
                int m22 = 0;
                for (int i = 0; i < chosen_; ++i)
                    if (deg_[pe_a_[i]] == 2 && deg_[pe_b_[i]] == 2) ++m22;
                if ((n2 < 4 || m22 < 1) && violations_.size() < kMaxViolationWitnesses)
                    violations_.push_back(leaf_graph6());
                break;
            }
        }
    }

    double leaf_value() const {
        double ti = 0.0;
        for (int i = 0; i < chosen_; ++i) ti += weight_table_[deg_[pe_a_[i]]][deg_[pe_b_[i]]];
        return ti;
    }

    Graph leaf_graph() const {
        GraphBuilder b(n_);
        for (int i = 0; i < chosen_; ++i) b.add_edge(pe_a_[i], pe_b_[i]);
        return b.build();
    }

    std::string leaf_graph6() const { return encode_graph6(leaf_graph()); }

    void record_profile(double ti) {
        const Graph g = leaf_graph();
        DegreeProfile prof = degree_profile(g);
        EdgeClassCounts classes = edge_class_counts(g);

        std::ostringstream key;
        for (auto [d, c] : prof.counts) key << d << ':' << c << ',';
        key << '|';
        for (const auto& [cls, c] : classes.counts)
            key << cls.first << ',' << cls.second << ':' << c << ';';

        auto [it, fresh] = profiles_.try_emplace(key.str());
        MinimizerProfile& entry = it->second;
        if (fresh) {
            entry.degrees = std::move(prof);
            entry.classes = std::move(classes);
            entry.ti = ti;
            entry.example_graph6 = encode_graph6(g);
        }
        entry.ti = std::min(entry.ti, ti);
        ++entry.count;
    }

    struct UndoEntry {
        std::int8_t big, small;
        std::uint8_t size, live;
    };

    int n_, m_, edge_count_, cap_, dmin_, dmin_eff_;
    CollectMode mode_;
    std::array<std::uint8_t, 256> eu_{}, ev_{};
    double weight_table_[EnumerationSpec::max_n][EnumerationSpec::max_n] = {};

    std::uint8_t deg_[EnumerationSpec::max_n] = {};
    std::uint8_t rem_[EnumerationSpec::max_n] = {};
    std::int8_t parent_[EnumerationSpec::max_n] = {};
    std::uint8_t comp_size_[EnumerationSpec::max_n] = {};
    std::uint8_t live_[EnumerationSpec::max_n] = {};
    std::array<UndoEntry, 256> undo_log_{};
    std::array<std::uint8_t, 256> pe_a_{}, pe_b_{};
    std::array<std::uint8_t, 256> slack_drop_{};
    int comp_ = 0, chosen_ = 0, undo_len_ = 0, deficit_ = 0, capslack_ = 0;

    double local_min_ = std::numeric_limits<double>::infinity();
    std::uint64_t visited_ = 0, lemma_checked_ = 0;
    std::map<std::string, MinimizerProfile> profiles_;
    std::vector<std::string> violations_;
    std::map<long long, std::uint64_t> histogram_;
    std::string example_;
};

struct SubtreePrefix {
    std::uint64_t bits = 0;  // decision per edge index, LSB first
    int depth = 0;
};

/// Expands the decision tree breadth-first until at least `target` live
/// prefixes exist (or the tree is exhausted). Prefix order is the DFS
/// visiting order, which makes later merges deterministic.
inline std::vector<SubtreePrefix> partition_subtrees(EnumEngine& engine, int edge_count,
                                                     int target) {
    std::vector<SubtreePrefix> live{{0, 0}};
    while (static_cast<int>(live.size()) < target) {
        if (live.empty() || live.front().depth >= edge_count) break;
        std::vector<SubtreePrefix> next;
        next.reserve(live.size() * 2);
        bool grew = false;
        for (const SubtreePrefix& p : live) {
            engine.reset();
            bool feasible = true;
            for (int t = 0; t < p.depth; ++t)
                if (!engine.try_decide(t, p.bits >> t & 1)) {
                    feasible = false;
                    break;
                }
            if (!feasible) continue;  // cannot happen for prefixes we produced
            for (int bit = 1; bit >= 0; --bit) {
                if (engine.try_decide(p.depth, bit != 0)) {
                    next.push_back({p.bits | (std::uint64_t(bit) << p.depth), p.depth + 1});
                    engine.undo_decide(p.depth, bit != 0);
                    grew = true;
                }
            }
        }
        live = std::move(next);
        if (!grew) break;
    }
    engine.reset();
    return live;
}

struct SubtreeOutcome {
    bool done = false;
    double min = std::numeric_limits<double>::infinity();
    std::uint64_t visited = 0, lemma_checked = 0;
    std::string example;
    std::vector<std::pair<std::string, MinimizerProfile>> profiles;
    std::vector<std::string> violations;
    std::map<long long, std::uint64_t> histogram;
};

inline std::uint64_t digest_string(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const MinimizerProfile& p) {
    nlohmann::json degrees = nlohmann::json::array();
    for (auto [d, c] : p.degrees.counts) degrees.push_back({d, c});
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& [cls, c] : p.classes.counts)
        classes.push_back({cls.first, cls.second, c});
    j = {{"degrees", degrees},
         {"classes", classes},
         {"ti", p.ti},
         {"count", p.count},
         {"example_graph6", p.example_graph6}};
}

inline MinimizerProfile minimizer_profile_from_json(const nlohmann::json& j) {
    MinimizerProfile p;
    for (const auto& dc : j.at("degrees"))
        p.degrees.counts[dc.at(0).get<int>()] = dc.at(1).get<int>();
    if (!p.degrees.counts.empty()) {
        p.degrees.min_degree = p.degrees.counts.begin()->first;
        p.degrees.max_degree = p.degrees.counts.rbegin()->first;
    }
    for (const auto& cc : j.at("classes"))
        p.classes.counts[{cc.at(0).get<int>(), cc.at(1).get<int>()}] = cc.at(2).get<int>();
    p.ti = j.at("ti").get<double>();
    p.count = j.at("count").get<std::uint64_t>();
    p.example_graph6 = j.at("example_graph6").get<std::string>();
    return p;
}

namespace detail {
inline SearchResult enumerate_min_ordered(const EnumerationSpec& spec,
                                          const std::vector<std::pair<int, int>>& order,
                                          const OracleOptions& opts);
}  // namespace detail

/// Exact minimum of the index over all labeled connected graphs matching
/// the spec. Work is split into subtrees by the first few edge decisions;
/// workers own disjoint subtrees and results merge in subtree order, so the
/// outcome does not depend on the worker count. With a checkpoint path,
/// finished subtrees are persisted and skipped on resume.
inline SearchResult enumerate_min(const EnumerationSpec& spec,
                                  const OracleOptions& opts = {}) {
    spec.validate();
    std::vector<std::pair<int, int>> order;
    for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) order.emplace_back(i, j);
    return detail::enumerate_min_ordered(spec, order, opts);
}

namespace detail {

inline SearchResult enumerate_min_ordered(const EnumerationSpec& spec,
                                          const std::vector<std::pair<int, int>>& order,
                                          const OracleOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    const int edge_count = static_cast<int>(order.size());

    EnumEngine scout(spec, order);
    const int workers = opts.workers > 0
                            ? opts.workers
                            : std::max(1u, std::thread::hardware_concurrency());
    const int target = std::max(opts.min_subtrees, 4 * workers);
    std::vector<SubtreePrefix> prefixes = partition_subtrees(scout, edge_count, target);
    const std::size_t jobs = prefixes.size();

    std::vector<SubtreeOutcome> outcomes(jobs);

    // resumable cursor: skip subtrees a previous run already finished
    const std::uint64_t digest =
        digest_string(spec.to_json_value().dump() + "#" + std::to_string(jobs) + "#" +
                      std::to_string(edge_count));
    std::uint64_t loaded = 0;
    if (!opts.checkpoint_path.empty()) {
        std::ifstream in(opts.checkpoint_path);
        if (in) {
            try {
                nlohmann::json j = nlohmann::json::parse(in);
                if (j.at("version").get<int>() == 1 &&
                    j.at("digest").get<std::string>() == std::to_string(digest)) {
                    for (const auto& entry : j.at("done")) {
                        std::size_t i = entry.at("i").get<std::size_t>();
                        if (i >= jobs) continue;
                        SubtreeOutcome& o = outcomes[i];
                        o.done = true;
                        o.min = entry.at("min").is_null()
                                    ? std::numeric_limits<double>::infinity()
                                    : entry.at("min").get<double>();
                        o.visited = entry.at("visited").get<std::uint64_t>();
                        o.lemma_checked = entry.at("lemma_checked").get<std::uint64_t>();
                        o.example = entry.at("example").get<std::string>();
                        for (const auto& pj : entry.at("profiles"))
                            o.profiles.emplace_back(pj.at("key").get<std::string>(),
                                                    minimizer_profile_from_json(pj));
                        for (const auto& v : entry.at("violations"))
                            o.violations.push_back(v.get<std::string>());
                        for (const auto& hv : entry.at("histogram"))
                            o.histogram[hv.at(0).get<long long>()] =
                                hv.at(1).get<std::uint64_t>();
                        ++loaded;
                    }
                }
            } catch (const nlohmann::json::exception&) {
                // stale or foreign file: start fresh and overwrite below
            }
        }
    }

    std::mutex checkpoint_mutex;
    std::uint64_t leaves_since_write = 0;
    auto write_checkpoint = [&]() {
        nlohmann::json done = nlohmann::json::array();
        for (std::size_t i = 0; i < jobs; ++i) {
            const SubtreeOutcome& o = outcomes[i];
            if (!o.done) continue;
            nlohmann::json profiles = nlohmann::json::array();
            for (const auto& [key, p] : o.profiles) {
                nlohmann::json pj = p;
                pj["key"] = key;
                profiles.push_back(pj);
            }
            nlohmann::json hist = nlohmann::json::array();
            for (auto [k, c] : o.histogram) hist.push_back({k, c});
            done.push_back({{"i", i},
                            {"min", std::isfinite(o.min) ? nlohmann::json(o.min)
                                                         : nlohmann::json()},
                            {"visited", o.visited},
                            {"lemma_checked", o.lemma_checked},
                            {"example", o.example},
                            {"profiles", profiles},
                            {"violations", o.violations},
                            {"histogram", hist}});
        }
        nlohmann::json j{{"version", 1},
                         {"digest", std::to_string(digest)},
                         {"spec", spec.to_json_value()},
                         {"subtrees", jobs},
                         {"done", done}};
        const std::string tmp = opts.checkpoint_path + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump();
        }
        std::filesystem::rename(tmp, opts.checkpoint_path);
    };

    std::atomic<std::size_t> next{0};
    auto worker_loop = [&]() {
        EnumEngine engine(spec, order);
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs) break;
            if (outcomes[i].done) continue;  // restored from the checkpoint
            const SubtreePrefix& p = prefixes[i];
            engine.reset();
            bool feasible = true;
            for (int t = 0; t < p.depth && feasible; ++t)
                feasible = engine.try_decide(t, p.bits >> t & 1);
            if (feasible) engine.run(p.depth, engine.chosen());

            SubtreeOutcome& o = outcomes[i];
            o.min = engine.local_min();
            o.visited = engine.visited();
            o.lemma_checked = engine.lemma_checked();
            o.example = engine.example();
            o.profiles.assign(engine.profiles().begin(), engine.profiles().end());
            o.violations = engine.violations();
            o.histogram = engine.histogram();

            if (opts.checkpoint_path.empty()) {
                o.done = true;  // only read after the join
            } else {
                // done flags flip under the lock so a checkpoint written by
                // any worker sees fully populated outcomes
                std::lock_guard<std::mutex> lock(checkpoint_mutex);
                o.done = true;
                leaves_since_write += o.visited;
                if (leaves_since_write >= opts.checkpoint_leaf_interval) {
                    write_checkpoint();
                    leaves_since_write = 0;
                }
            }
        }
    };

    if (workers == 1 || jobs <= 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
        for (auto& th : pool) th.join();
    }

    if (!opts.checkpoint_path.empty()) write_checkpoint();

    // deterministic merge in subtree order
    SearchResult result;
    result.subtree_count = static_cast<int>(jobs);
    double min_value = std::numeric_limits<double>::infinity();
    for (const SubtreeOutcome& o : outcomes) {
        result.graphs_visited += o.visited;
        result.lemma_checked += o.lemma_checked;
        min_value = std::min(min_value, o.min);
        for (auto [k, c] : o.histogram) result.histogram[k] += c;
        for (const std::string& v : o.violations)
            if (result.lemma_violations.size() < kMaxViolationWitnesses)
                result.lemma_violations.push_back(v);
    }
    if (std::isfinite(min_value)) {
        result.min_value = min_value;
        std::map<std::string, MinimizerProfile> merged;
        for (const SubtreeOutcome& o : outcomes) {
            if (result.example_minimizer.empty() && o.min <= min_value + kMinSlack)
                result.example_minimizer = o.example;
            for (const auto& [key, p] : o.profiles) {
                if (p.ti > min_value + kMinSlack) continue;
                auto [it, fresh] = merged.try_emplace(key, p);
                if (!fresh) {
                    it->second.count += p.count;
                    it->second.ti = std::min(it->second.ti, p.ti);
                }
            }
        }
        result.minimizer_profiles.reserve(merged.size());
        for (auto& [_, p] : merged) result.minimizer_profiles.push_back(std::move(p));
    }

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    (void)loaded;
    return result;
}

}  // namespace detail

enum class GraphClass { chemical, delta2, all };

inline const char* graph_class_name(GraphClass c) {
    switch (c) {
        case GraphClass::chemical: return "chemical";
        case GraphClass::delta2:   return "delta2";
        case GraphClass::all:      return "all";
    }
    return "unknown";
}

struct TheoremReport {
    EnumerationSpec spec;
    double closed_form = 0.0;
    SearchResult result;
    bool min_matches = false;
    bool profiles_match = false;

    bool pass() const { return min_matches && profiles_match; }
};

/// Exhaustive check of the structure theorem on one instance: the
/// enumerated minimum must equal the closed form, and every minimizing
/// profile must be the bidegreed {2,3} profile with classes
/// (n-2k+1, 2, 3k-4). The delta2 class restricts to minimum degree 2 with
/// the cap any such graph satisfies anyway (d <= 2m - 2(n-1)); "all" runs
/// uncapped.
inline TheoremReport verify_theorem(int n, int k, const WeightFunction& w, GraphClass cls,
                                    const OracleOptions& opts = {}) {
    if (k < 3 || n < 5 * (k - 1))
        fail(errc::hypothesis_violated,
             "theorem requires k >= 3 and n >= 5(k-1); got n = " + std::to_string(n) +
                 ", k = " + std::to_string(k));
    if (check_property_pstar(w).pstar_holds != Verdict::pass)
        fail(errc::hypothesis_violated,
             "weight " + w.name() + " is not grid-certified for the required property");

    TheoremReport report;
    report.spec.n = n;
    report.spec.m = n + k - 1;
    report.spec.weight = w;
    report.spec.collect = CollectMode::min_profiles;
    switch (cls) {
        case GraphClass::chemical:
            report.spec.max_degree = 4;
            break;
        case GraphClass::delta2:
            report.spec.min_degree = 2;
            report.spec.max_degree =
                std::min(n - 1, 2 * report.spec.m - 2 * (n - 1));
            break;
        case GraphClass::all:
            break;
    }
    report.closed_form = closed_form_min(n, k, w);
    report.result = enumerate_min(report.spec, opts);

    report.min_matches =
        std::isfinite(report.result.min_value) &&
        std::abs(report.result.min_value - report.closed_form) <=
            1e-9 * std::max(1.0, std::abs(report.closed_form));

    const std::map<int, int> want_degrees{{2, n - 2 * k + 2}, {3, 2 * (k - 1)}};
    const std::map<std::pair<int, int>, int> want_classes{
        {{2, 2}, n - 2 * k + 1}, {{2, 3}, 2}, {{3, 3}, 3 * k - 4}};
    report.profiles_match = !report.result.minimizer_profiles.empty();
    for (const auto& p : report.result.minimizer_profiles)
        if (p.degrees.counts != want_degrees || p.classes.counts != want_classes)
            report.profiles_match = false;
    return report;
}

struct AlmostRegularReport {
    struct Violation {
        int n = 0, m = 0;
        std::string weight;
        std::string graph6;
        int spread = 0;  // max degree - min degree of the offending profile
    };

    int n_max = 0;
    std::uint64_t cases_checked = 0;  // (n, m, weight) triples enumerated
    std::uint64_t graphs_visited = 0;
    std::vector<Violation> violations;
    std::vector<std::string> skipped_weights;  // lacking grid-certified property

    bool pass() const { return violations.empty(); }
};

/// Sweeps every connected class (n <= n_max, all feasible m) and asserts
/// that minimizing degree profiles are almost regular (spread <= 1).
inline AlmostRegularReport verify_almost_regular_minimizers(
    int n_max, const std::vector<WeightFunction>& weights, const OracleOptions& opts = {}) {
    if (n_max > 8) fail(errc::cap_exceeded, "full sweep capped at n_max = 8");
    if (n_max < 2) fail(errc::infeasible, "need n_max >= 2");

    AlmostRegularReport report;
    report.n_max = n_max;

    std::vector<WeightFunction> certified;
    for (const auto& w : weights) {
        if (check_property_pstar(w).pstar_holds == Verdict::pass)
            certified.push_back(w);
        else
            report.skipped_weights.push_back(w.name());
    }

    for (int n = 2; n <= n_max; ++n) {
        for (int m = n - 1; m <= n * (n - 1) / 2; ++m) {
            for (const auto& w : certified) {
                EnumerationSpec spec;
                spec.n = n;
                spec.m = m;
                spec.weight = w;
                SearchResult r = enumerate_min(spec, opts);
                ++report.cases_checked;
                report.graphs_visited += r.graphs_visited;
                for (const auto& p : r.minimizer_profiles) {
                    int spread = p.degrees.max_degree - p.degrees.min_degree;
                    if (spread > 1)
                        report.violations.push_back(
                            {n, m, w.name(), p.example_graph6, spread});
                }
            }
        }
    }
    return report;
}

struct StructuralLemmaReport {
    int n = 0, k = 0, m = 0;
    std::uint64_t graphs_visited = 0;  // connected, min degree >= 2
    std::uint64_t graphs_checked = 0;  // subset with max degree >= 4
    std::vector<std::string> violations;

    bool pass() const { return violations.empty(); }
};

/// Enumerates connected (n, n+k-1)-graphs with minimum degree 2 and checks
/// n_2 >= 4 and m_{2,2} >= 1 on every member with maximum degree >= 4.
inline StructuralLemmaReport verify_structural_lemmas(int n, int k,
                                                      const OracleOptions& opts = {}) {
    if (n < 5 * (k - 1))
        fail(errc::hypothesis_violated, "sweep requires n >= 5(k-1)");

    StructuralLemmaReport report;
    report.n = n;
    report.k = k;
    report.m = n + k - 1;

    EnumerationSpec spec;
    spec.n = n;
    spec.m = report.m;
    spec.min_degree = 2;
    spec.max_degree = std::min(n - 1, 2 * report.m - 2 * (n - 1));
    spec.collect = CollectMode::lemma_predicates;
    SearchResult r = enumerate_min(spec, opts);

    report.graphs_visited = r.graphs_visited;
    report.graphs_checked = r.lemma_checked;
    report.violations = r.lemma_violations;
    return report;
}

// -- JSON serialization --------------------------------------------------

inline void to_json(nlohmann::json& j, const SearchResult& r) {
    j = {{"min_value", std::isfinite(r.min_value) ? nlohmann::json(r.min_value)
                                                  : nlohmann::json()},
         {"minimizer_profiles", r.minimizer_profiles},
         {"example_minimizer_graph6", r.example_minimizer},
         {"graphs_visited", r.graphs_visited},
         {"subtree_count", r.subtree_count},
         {"elapsed_seconds", r.elapsed_seconds}};
    if (!r.histogram.empty()) {
        nlohmann::json hist = nlohmann::json::array();
        for (auto [k2, c] : r.histogram)
            hist.push_back({static_cast<double>(k2) / 1e9, c});
        j["histogram"] = hist;
    }
    if (r.lemma_checked > 0 || !r.lemma_violations.empty()) {
        j["lemma_checked"] = r.lemma_checked;
        j["lemma_violations"] = r.lemma_violations;
    }
}

inline void to_json(nlohmann::json& j, const TheoremReport& r) {
    j = {{"spec", r.spec.to_json_value()},
         {"min_value", std::isfinite(r.result.min_value)
                           ? nlohmann::json(r.result.min_value)
                           : nlohmann::json()},
         {"closed_form", r.closed_form},
         {"match", r.pass()},
         {"min_matches", r.min_matches},
         {"profiles_match", r.profiles_match},
         {"minimizer_profiles", r.result.minimizer_profiles},
         {"example_minimizer_graph6", r.result.example_minimizer},
         {"graphs_visited", r.result.graphs_visited},
         {"elapsed_seconds", r.result.elapsed_seconds}};
}

inline void to_json(nlohmann::json& j, const AlmostRegularReport::Violation& v) {
    j = {{"n", v.n},
         {"m", v.m},
         {"weight", v.weight},
         {"graph6", v.graph6},
         {"spread", v.spread}};
}

inline void to_json(nlohmann::json& j, const AlmostRegularReport& r) {
    j = {{"n_max", r.n_max},
         {"cases_checked", r.cases_checked},
         {"graphs_visited", r.graphs_visited},
         {"violations", r.violations},
         {"skipped_weights", r.skipped_weights},
         {"pass", r.pass()}};
}

inline void to_json(nlohmann::json& j, const StructuralLemmaReport& r) {
    j = {{"n", r.n},
         {"k", r.k},
         {"m", r.m},
         {"graphs_visited", r.graphs_visited},
         {"graphs_checked", r.graphs_checked},
         {"violations", r.violations},
         {"pass", r.pass()}};
}

}  // namespace vdb
