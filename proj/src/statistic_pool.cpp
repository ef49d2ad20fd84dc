#include "abcselect/statistic_pool.hpp"

namespace abcselect {

SummaryVector evaluate_subset(const StatisticPool& pool, const StatisticSubset& subset,
                              const Dataset& data, const RngStream& noise_root) {
    pool.check_subset(subset);
    SummaryVector out(pool.subset_width(subset));
    int at_comp = 0;
    for (int idx : subset) {
        const Statistic& s = pool.at(idx);
        if (s.expects != data.kind())
            throw VariantMismatchError(s.name, std::string("expects ") + to_string(s.expects) +
                                                   " but dataset is " + to_string(data.kind()));
        RngStream stream = noise_root.substream(s.name).substream(data.id());
        const Eigen::VectorXd v = s.eval(data, stream);
        if (v.size() != s.arity)
            throw InvariantError("statistic '" + s.name + "' returned " +
                                 std::to_string(v.size()) + " values, declared arity " +
                                 std::to_string(s.arity));
        if (!v.allFinite()) throw NonFiniteStatisticError(s.name);
        out.segment(at_comp, s.arity) = v;
        at_comp += s.arity;
    }
    return out;
}

}  // namespace abcselect
