#include "abcselect/models/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "abcselect/errors.hpp"

namespace abcselect {

void CoalescentSpec::validate() const {
    if (sample_size < 2) throw InvariantError("coalescent sample size must be >= 2");
    if (!(theta > 0.0)) throw InvariantError("theta must be positive");
    if (growth_rate < 0.0) throw InvariantError("growth rate must be non-negative");
    if (scenario == CoalescentScenario::TwoIsland) {
        if (!(migration_rate > 0.0))
            throw InvariantError("two-island model needs a positive migration rate");
        const int n1 = deme1();
        if (n1 < 0 || n1 > sample_size) throw InvariantError("invalid deme split");
    }
}

double Genealogy::total_branch_length() const {
    double len = 0.0;
    for (int v = 0; v < node_count(); ++v)
        if (parent[static_cast<std::size_t>(v)] >= 0)
            len += node_time[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] -
                   node_time[static_cast<std::size_t>(v)];
    return len;
}

int Genealogy::coalescence_count() const {
    int c = 0;
    for (const auto& e : events)
        if (e.kind == GenealogyEvent::Kind::Coalescence) ++c;
    return c;
}

namespace {

struct Lineage {
    int node;
    int deme;
};

/// Merge two active lineages into a new node at `time`.
void coalesce(std::vector<Lineage>& active, std::size_t i, std::size_t j, double time,
              Genealogy& g, int& next_node) {
    const int a = active[i].node, b = active[j].node;
    const int p = next_node++;
    g.parent[static_cast<std::size_t>(a)] = p;
    g.parent[static_cast<std::size_t>(b)] = p;
    g.node_time[static_cast<std::size_t>(p)] = time;
    g.events.push_back({time, GenealogyEvent::Kind::Coalescence, a, b, -1, -1});
    active[i].node = p;  // deme inherited from lineage i
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
}

void simulate_single_population(const CoalescentSpec& spec, RngStream& rng, Genealogy& g) {
    const double gamma =
        spec.scenario == CoalescentScenario::ExpGrowth ? spec.growth_rate : 0.0;
    std::vector<Lineage> active;
    for (int i = 0; i < spec.sample_size; ++i) active.push_back({i, 0});
    int next_node = spec.sample_size;
    double time = 0.0;
    while (active.size() > 1) {
        const double k = static_cast<double>(active.size());
        const double base_rate = 0.5 * k * (k - 1.0);
        const double e = rng.exponential();
        double wait;
        if (gamma < 1e-12) {
            wait = e / base_rate;
        } else {
            // Invert the integrated intensity of rate(t) = base * exp(gamma t).
            wait = std::log1p(gamma * e / (base_rate * std::exp(gamma * time))) / gamma;
        }
        time += wait;
        const std::size_t i = rng.uniform_int(active.size());
        std::size_t j = rng.uniform_int(active.size() - 1);
        if (j >= i) ++j;
        coalesce(active, std::min(i, j), std::max(i, j), time, g, next_node);
    }
}

void simulate_two_island(const CoalescentSpec& spec, RngStream& rng, Genealogy& g) {
    std::vector<Lineage> active;
    const int n1 = spec.deme1();
    for (int i = 0; i < spec.sample_size; ++i) active.push_back({i, i < n1 ? 0 : 1});
    int next_node = spec.sample_size;
    double time = 0.0;
    while (active.size() > 1) {
        std::size_t k0 = 0, k1 = 0;
        for (const auto& l : active) (l.deme == 0 ? k0 : k1)++;
        const double c0 = 0.5 * static_cast<double>(k0) * static_cast<double>(k0 - 1);
        const double c1 = 0.5 * static_cast<double>(k1) * static_cast<double>(k1 - 1);
        const double mig = 0.5 * spec.migration_rate * static_cast<double>(active.size());
        const double total = c0 + c1 + mig;
        time += rng.exponential(total);
        const double pick = rng.uniform() * total;
        if (pick < c0 + c1) {
            const int deme = pick < c0 ? 0 : 1;
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < active.size(); ++i)
                if (active[i].deme == deme) members.push_back(i);
            const std::size_t a = members[rng.uniform_int(members.size())];
            std::size_t b = a;
            while (b == a) b = members[rng.uniform_int(members.size())];
            coalesce(active, std::min(a, b), std::max(a, b), time, g, next_node);
        } else {
            const std::size_t i = rng.uniform_int(active.size());
            const int from = active[i].deme;
            active[i].deme = 1 - from;
            g.events.push_back({time, GenealogyEvent::Kind::Migration, active[i].node, -1,
                                from, active[i].deme});
        }
    }
}

}  // namespace

Genealogy simulate_genealogy(const CoalescentSpec& spec, RngStream& rng) {
    spec.validate();
    Genealogy g;
    g.sample_size = spec.sample_size;
    g.parent.assign(static_cast<std::size_t>(g.node_count()), -1);
    g.node_time.assign(static_cast<std::size_t>(g.node_count()), 0.0);
    if (spec.scenario == CoalescentScenario::TwoIsland)
        simulate_two_island(spec, rng, g);
    else
        simulate_single_population(spec, rng, g);
    return g;
}

Dataset simulate_coalescent(const CoalescentSpec& spec, RngStream& rng) {
    const Genealogy g = simulate_genealogy(spec, rng);
    const int n = g.sample_size;
    const int nodes = g.node_count();

    // Leaves below each node; children always carry smaller ids.
    std::vector<std::vector<int>> leaves_below(static_cast<std::size_t>(nodes));
    for (int v = 0; v < n; ++v) leaves_below[static_cast<std::size_t>(v)] = {v};
    for (int v = 0; v < nodes; ++v) {
        const int p = g.parent[static_cast<std::size_t>(v)];
        if (p >= 0) {
            auto& up = leaves_below[static_cast<std::size_t>(p)];
            const auto& mine = leaves_below[static_cast<std::size_t>(v)];
            up.insert(up.end(), mine.begin(), mine.end());
        }
    }

    std::vector<double> edge_len(static_cast<std::size_t>(nodes), 0.0);
    double total_len = 0.0;
    for (int v = 0; v < nodes; ++v) {
        const int p = g.parent[static_cast<std::size_t>(v)];
        if (p >= 0) {
            edge_len[static_cast<std::size_t>(v)] =
                g.node_time[static_cast<std::size_t>(p)] - g.node_time[static_cast<std::size_t>(v)];
            total_len += edge_len[static_cast<std::size_t>(v)];
        }
    }

    const std::uint64_t n_mut = rng.poisson(0.5 * spec.theta * total_len);
    struct Mutation {
        double time;
        int node;
    };
    std::vector<Mutation> muts;
    muts.reserve(n_mut);
    for (std::uint64_t m = 0; m < n_mut; ++m) {
        double pos = rng.uniform() * total_len;
        int node = nodes - 2;  // fallback for floating-point edge overshoot
        for (int v = 0; v < nodes; ++v) {
            const double len = edge_len[static_cast<std::size_t>(v)];
            if (pos < len) {
                node = v;
                break;
            }
            pos -= len;
        }
        muts.push_back({g.node_time[static_cast<std::size_t>(node)] + pos, node});
    }
    std::stable_sort(muts.begin(), muts.end(),
                     [](const Mutation& a, const Mutation& b) { return a.time < b.time; });

    HaplotypeMatrix h = HaplotypeMatrix::Zero(n, static_cast<Eigen::Index>(muts.size()));
    for (std::size_t c = 0; c < muts.size(); ++c)
        for (int leaf : leaves_below[static_cast<std::size_t>(muts[c].node)])
            h(leaf, static_cast<Eigen::Index>(c)) = 1;
    return Dataset(std::move(h), stream_fingerprint(rng));
}

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

std::map<std::vector<std::uint8_t>, int> haplotype_counts(const HaplotypeMatrix& h) {
    std::map<std::vector<std::uint8_t>, int> counts;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        std::vector<std::uint8_t> row(static_cast<std::size_t>(h.cols()));
        for (Eigen::Index c = 0; c < h.cols(); ++c)
            row[static_cast<std::size_t>(c)] = h(r, c);
        ++counts[row];
    }
    return counts;
}

/// Derived-allele count per site.
Eigen::VectorXd derived_counts(const HaplotypeMatrix& h) {
    Eigen::VectorXd c(h.cols());
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        c[j] = static_cast<double>(h.col(j).cast<int>().sum());
    return c;
}

}  // namespace

StatisticPool popgen_pool() {
    StatisticPool pool("popgen11");
    const DatasetKind kind = DatasetKind::HaplotypeMatrix;

    pool.add({"S1", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  return scalar(static_cast<double>(d.haplotypes().cols()));
              }});
    pool.add({"S2", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  return scalar(static_cast<double>(haplotype_counts(d.haplotypes()).size()));
              }});
    pool.add({"S3", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const auto counts = haplotype_counts(d.haplotypes());
                  const double n = static_cast<double>(d.haplotypes().rows());
                  double h = 0.0;
                  for (const auto& [pattern, c] : counts) {
                      const double f = static_cast<double>(c) / n;
                      h += f * f;
                  }
                  return scalar(h);
              }});
    pool.add({"S4", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const HaplotypeMatrix& hm = d.haplotypes();
                  if (hm.cols() == 0) return scalar(0.0);
                  const double n = static_cast<double>(hm.rows());
                  const Eigen::VectorXd ones = derived_counts(hm);
                  double sum = 0.0;
                  for (Eigen::Index j = 0; j < hm.cols(); ++j) {
                      const double v1 = ones[j] / n;
                      const double v0 = 1.0 - v1;
                      sum += v0 * v0 + v1 * v1;
                  }
                  return scalar(sum / static_cast<double>(hm.cols()));
              }});
    pool.add({"S5", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  int best = 0;
                  for (const auto& [pattern, c] : haplotype_counts(d.haplotypes()))
                      best = std::max(best, c);
                  return scalar(static_cast<double>(best));
              }});
    pool.add({"S6", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const HaplotypeMatrix& hm = d.haplotypes();
                  const double n = static_cast<double>(hm.rows());
                  if (n < 2) return scalar(0.0);
                  const Eigen::VectorXd ones = derived_counts(hm);
                  double diff_sum = 0.0;
                  for (Eigen::Index j = 0; j < hm.cols(); ++j)
                      diff_sum += ones[j] * (n - ones[j]);
                  return scalar(diff_sum / (0.5 * n * (n - 1.0)));
              }});
    pool.add({"S7", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  int singles = 0;
                  for (const auto& [pattern, c] : haplotype_counts(d.haplotypes()))
                      if (c == 1) ++singles;
                  return scalar(static_cast<double>(singles));
              }});
    pool.add({"S8", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const Eigen::VectorXd ones = derived_counts(d.haplotypes());
                  return scalar(static_cast<double>((ones.array() == 1.0).count()));
              }});
    pool.add({"S9", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const HaplotypeMatrix& hm = d.haplotypes();
                  const Eigen::Index s = hm.cols();
                  if (s < 2) return scalar(0.0);
                  const double n = static_cast<double>(hm.rows());
                  const Eigen::VectorXd ones = derived_counts(hm);
                  double sum = 0.0;
                  for (Eigen::Index i = 0; i < s - 1; ++i) {
                      for (Eigen::Index j = i + 1; j < s; ++j) {
                          double c00 = 0.0;
                          for (Eigen::Index r = 0; r < hm.rows(); ++r)
                              if (hm(r, i) == 0 && hm(r, j) == 0) c00 += 1.0;
                          const double v0i = 1.0 - ones[i] / n, v1i = ones[i] / n;
                          const double v0j = 1.0 - ones[j] / n, v1j = ones[j] / n;
                          const double dd = c00 / n - v0i * v0j;
                          sum += dd * dd / (v0i * v1i * v0j * v1j);
                      }
                  }
                  const double pairs = 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
                  return scalar(sum / pairs);
              }});
    pool.add({"S10", 1, kind, 0.0, [](const Dataset& d, RngStream&) {
                  const HaplotypeMatrix& hm = d.haplotypes();
                  const Eigen::Index s = hm.cols();
                  if (s < 2) return scalar(0.0);
                  double violations = 0.0;
                  for (Eigen::Index i = 0; i < s - 1; ++i) {
                      for (Eigen::Index j = i + 1; j < s; ++j) {
                          bool g00 = false, g01 = false, g10 = false, g11 = false;
                          for (Eigen::Index r = 0; r < hm.rows(); ++r) {
                              const bool a = hm(r, i) != 0, b = hm(r, j) != 0;
                              (a ? (b ? g11 : g10) : (b ? g01 : g00)) = true;
                          }
                          if (g00 && g01 && g10 && g11) violations += 1.0;
                      }
                  }
                  const double pairs = 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
                  return scalar(violations / pairs);
              }});
    pool.add({"S11", 1, kind, 0.0,
              [](const Dataset&, RngStream& rng) { return scalar(rng.uniform()); }});
    return pool;
}

std::vector<ModelSpec> coalescent_models(double theta_lo, double theta_hi, int sample_size) {
    if (!(theta_lo > 0.0) || !(theta_hi > theta_lo))
        throw InvariantError("theta prior requires 0 < lo < hi");
    const auto prior_sampler = [theta_lo, theta_hi](RngStream& rng) {
        return Eigen::VectorXd::Constant(1, rng.uniform(theta_lo, theta_hi));
    };
    const auto prior_density = [theta_lo, theta_hi](const Eigen::VectorXd& theta) {
        return (theta[0] >= theta_lo && theta[0] <= theta_hi) ? 1.0 / (theta_hi - theta_lo)
                                                              : 0.0;
    };
    const auto make = [&](const char* name, CoalescentScenario scenario) {
        ModelSpec m;
        m.name = name;
        m.param_dim = 1;
        m.output_kind = DatasetKind::HaplotypeMatrix;
        m.sample_prior = prior_sampler;
        m.prior_density = prior_density;
        m.simulate = [scenario, sample_size](const Eigen::VectorXd& theta, RngStream& rng) {
            CoalescentSpec spec;
            spec.scenario = scenario;
            spec.sample_size = sample_size;
            spec.theta = theta[0];
            return simulate_coalescent(spec, rng);
        };
        return m;
    };
    return {make("coal-const", CoalescentScenario::Constant),
            make("coal-growth", CoalescentScenario::ExpGrowth),
            make("coal-island", CoalescentScenario::TwoIsland)};
}

}  // namespace abcselect
