#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vdb/errors.hpp"
#include "vdb/graph.hpp"

namespace vdb {

enum class weight_family {
    sombor,                    // sqrt(x^2 + y^2)
    general_sombor,            // (x^2 + y^2)^alpha,  alpha != 0
    p_sombor,                  // (x^p + y^p)^(1/p),  p != 0
    general_sum_connectivity,  // (x + y)^alpha,      alpha != 0
    general_randic,            // (x*y)^alpha,        alpha != 0
    exponential,               // e^(inner(x, y))
    custom,                    // dense table over integer degrees
};

inline const char* family_name(weight_family f) {
    switch (f) {
        case weight_family::sombor:                   return "sombor";
        case weight_family::general_sombor:           return "general_sombor";
        case weight_family::p_sombor:                 return "p_sombor";
        case weight_family::general_sum_connectivity: return "general_sum_connectivity";
        case weight_family::general_randic:           return "general_randic";
        case weight_family::exponential:              return "exponential";
        case weight_family::custom:                   return "custom";
    }
    return "unknown";
}

/// Symmetric positive edge-weight function I(x, y) on x, y >= 1.
///
/// Values are immutable and cheap to copy; eval is pure, so a single
/// instance may be shared freely across threads.
class WeightFunction {
public:
    static WeightFunction sombor() { return WeightFunction(weight_family::sombor, 0.0); }

    static WeightFunction general_sombor(double alpha) {
        require_nonzero(alpha, "general_sombor alpha");
        return WeightFunction(weight_family::general_sombor, alpha);
    }

    static WeightFunction p_sombor(double p) {
        require_nonzero(p, "p_sombor p");
        return WeightFunction(weight_family::p_sombor, p);
    }

    static WeightFunction general_sum_connectivity(double alpha) {
        require_nonzero(alpha, "general_sum_connectivity alpha");
        return WeightFunction(weight_family::general_sum_connectivity, alpha);
    }

    static WeightFunction general_randic(double alpha) {
        require_nonzero(alpha, "general_randic alpha");
        return WeightFunction(weight_family::general_randic, alpha);
    }

    static WeightFunction exponential_of(WeightFunction inner) {
        WeightFunction w(weight_family::exponential, 0.0);
        w.inner_ = std::make_shared<WeightFunction>(std::move(inner));
        return w;
    }

    /// Dense symmetric table over integer degrees 1..dmax, row-major
    /// values[(x-1)*dmax + (y-1)]. All entries must be positive and the
    /// table exactly symmetric.
    static WeightFunction custom_table(int dmax, std::vector<double> values) {
        if (dmax < 1) fail(errc::parameter_error, "custom table needs dmax >= 1");
        if (values.size() != static_cast<std::size_t>(dmax) * static_cast<std::size_t>(dmax))
            fail(errc::parameter_error, "custom table must hold dmax*dmax entries");
        for (int x = 0; x < dmax; ++x)
            for (int y = 0; y < dmax; ++y) {
                double v = values[static_cast<std::size_t>(x) * dmax + y];
                if (!(v > 0.0))
                    fail(errc::parameter_error, "custom table entries must be positive");
                if (v != values[static_cast<std::size_t>(y) * dmax + x])
                    fail(errc::parameter_error, "custom table must be symmetric");
            }
        WeightFunction w(weight_family::custom, 0.0);
        w.table_dmax_ = dmax;
        w.table_ = std::make_shared<std::vector<double>>(std::move(values));
        return w;
    }

    weight_family family() const { return family_; }
    double param() const { return param_; }
    const WeightFunction* inner() const { return inner_.get(); }

    /// Table-backed weights are defined on integer degrees only.
    bool integer_domain() const {
        if (family_ == weight_family::custom) return true;
        if (family_ == weight_family::exponential) return inner_->integer_domain();
        return false;
    }

    int table_dmax() const { return table_dmax_; }

    double eval(double x, double y) const {
        if (!(x >= 1.0) || !(y >= 1.0))
            fail(errc::domain_error, "weight arguments must satisfy x, y >= 1");
        switch (family_) {
            case weight_family::sombor:
                return std::sqrt(x * x + y * y);
            case weight_family::general_sombor:
                return std::pow(x * x + y * y, param_);
            case weight_family::p_sombor:
                return std::pow(std::pow(x, param_) + std::pow(y, param_), 1.0 / param_);
            case weight_family::general_sum_connectivity:
                return std::pow(x + y, param_);
            case weight_family::general_randic:
                return std::pow(x * y, param_);
            case weight_family::exponential: {
                double e = std::exp(inner_->eval(x, y));
                if (!std::isfinite(e))
                    fail(errc::overflow, "exp of inner weight overflows at (" +
                                             std::to_string(x) + "," + std::to_string(y) + ")");
                return e;
            }
            case weight_family::custom: {
                long xi = std::lround(x), yi = std::lround(y);
                if (std::abs(x - static_cast<double>(xi)) > 1e-9 ||
                    std::abs(y - static_cast<double>(yi)) > 1e-9)
                    fail(errc::domain_error, "table weight defined on integer degrees only");
                if (xi > table_dmax_ || yi > table_dmax_)
                    fail(errc::domain_error,
                         "degree beyond table dmax = " + std::to_string(table_dmax_));
                return (*table_)[static_cast<std::size_t>(xi - 1) * table_dmax_ + (yi - 1)];
            }
        }
        fail(errc::parameter_error, "unreachable weight family");
    }

    double operator()(double x, double y) const { return eval(x, y); }

    nlohmann::json id_json() const {
        nlohmann::json j{{"family", family_name(family_)}};
        switch (family_) {
            case weight_family::general_sombor:
            case weight_family::general_sum_connectivity:
            case weight_family::general_randic:
                j["alpha"] = param_;
                break;
            case weight_family::p_sombor:
                j["p"] = param_;
                break;
            case weight_family::exponential:
                j["inner"] = inner_->id_json();
                break;
            case weight_family::custom:
                j["dmax"] = table_dmax_;
                break;
            default:
                break;
        }
        return j;
    }

    std::string name() const {
        switch (family_) {
            case weight_family::sombor:
                return "sombor";
            case weight_family::general_sombor:
                return "general_sombor(alpha=" + fmt(param_) + ")";
            case weight_family::p_sombor:
                return "p_sombor(p=" + fmt(param_) + ")";
            case weight_family::general_sum_connectivity:
                return "general_sum_connectivity(alpha=" + fmt(param_) + ")";
            case weight_family::general_randic:
                return "general_randic(alpha=" + fmt(param_) + ")";
            case weight_family::exponential:
                return "exp(" + inner_->name() + ")";
            case weight_family::custom:
                return "custom_table(dmax=" + std::to_string(table_dmax_) + ")";
        }
        return "unknown";
    }

private:
    WeightFunction(weight_family f, double param) : family_(f), param_(param) {}

    static void require_nonzero(double v, const char* what) {
        if (v == 0.0 || !std::isfinite(v))
            fail(errc::parameter_error, std::string(what) + " must be nonzero and finite");
    }

    static std::string fmt(double v) {
        std::string s = std::to_string(v);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    weight_family family_;
    double param_;
    std::shared_ptr<const WeightFunction> inner_;
    std::shared_ptr<const std::vector<double>> table_;
    int table_dmax_ = 0;
};

/// FNV-1a over the vertex count and adjacency rows.
inline std::string graph_digest(const Graph& g) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= word >> (8 * b) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) mix(g.row(v));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

struct IndexValue {
    double value = 0.0;
    nlohmann::json index_id;
    std::string graph_digest;
};

/// TI(G) = sum over edges of I(d_u, d_v); 0 for an edgeless graph.
inline IndexValue compute_ti(const Graph& g, const WeightFunction& w) {
    double sum = 0.0;
    for (auto [u, v] : g.edges())
        sum += w.eval(static_cast<double>(g.degree(u)), static_cast<double>(g.degree(v)));
    return {sum, w.id_json(), graph_digest(g)};
}

/// Same sum via the class counts: sum of m_{i,j} * I(i, j).
inline double ti_from_class_counts(const EdgeClassCounts& classes, const WeightFunction& w) {
    double sum = 0.0;
    for (const auto& [cls, count] : classes.counts)
        sum += static_cast<double>(count) *
               w.eval(static_cast<double>(cls.first), static_cast<double>(cls.second));
    return sum;
}

inline IndexValue compute_exponential_ti(const Graph& g, const WeightFunction& w) {
    return compute_ti(g, WeightFunction::exponential_of(w));
}

/// 2 I(2,3) + (n-2k+1) I(2,2) + (3k-4) I(3,3), valid for k >= 3, n >= 5(k-1).
inline double closed_form_min(int n, int k, const WeightFunction& w) {
    if (k < 3 || n < 5 * (k - 1))
        fail(errc::hypothesis_violated,
             "closed form requires k >= 3 and n >= 5(k-1); got n = " + std::to_string(n) +
                 ", k = " + std::to_string(k));
    return 2.0 * w.eval(2, 3) + static_cast<double>(n - 2 * k + 1) * w.eval(2, 2) +
           static_cast<double>(3 * k - 4) * w.eval(3, 3);
}

}  // namespace vdb
