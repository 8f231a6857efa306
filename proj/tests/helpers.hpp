#ifndef ONPATH_TESTS_HELPERS_HPP
#define ONPATH_TESTS_HELPERS_HPP

#include <cstdlib>
#include <string>

#include "onpath/json_io.hpp"
#include "onpath/simgen.hpp"

namespace test_helpers {

inline onpath::Dataset load_figure(int n) {
    return onpath::dataset_from_file(std::string(ONPATH_SOURCE_DIR) + "/figures/fig" +
                                     std::to_string(n) + ".json");
}

/// Property suites honor RP_SEED so runs are reproducible but reseedable.
inline std::uint64_t base_seed() {
    if (const char* env = std::getenv("RP_SEED")) return std::strtoull(env, nullptr, 10);
    return 20240901ull;
}

/// Tiny dataset literal: space sizes plus (budget, choice) pairs given as
/// coordinate vectors.
inline onpath::Dataset make_dataset(const std::vector<int>& sizes,
                                    const std::vector<std::pair<std::vector<std::vector<int>>,
                                                                std::vector<int>>>& obs) {
    onpath::Dataset d;
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        std::vector<std::string> labels;
        for (int i = 0; i < sizes[t]; ++i) labels.push_back("v" + std::to_string(i));
        d.space.alternatives.push_back(std::move(labels));
    }
    for (const auto& [budget, choice] : obs) {
        onpath::Observation o;
        std::vector<onpath::OutcomeId> ids;
        for (const auto& c : budget) ids.push_back(d.space.id_of(c));
        o.budget = onpath::Budget::from_ids(std::move(ids));
        o.choice = d.space.id_of(choice);
        d.observations.push_back(std::move(o));
    }
    return d;
}

inline std::vector<int> coords(const onpath::Dataset& d, onpath::OutcomeId id) {
    return d.space.coords_of(id);
}

}  // namespace test_helpers

#endif
