#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sll {

// Canned end-to-end experiment producing one CSV per panel. `scale`
// multiplies the reference sizes (d, k, n); `runs` is the number of
// independent repetitions averaged where sampling is involved.
struct FigureRecipe {
    std::string name;
    double scale = 0.5;
    int runs = 5;

    void validate() const;
};

std::vector<std::string> recipe_names();
FigureRecipe recipe_by_name(const std::string& name);

// Runs the recipe, writes the CSVs and a JSON manifest into out_dir, and
// returns the manifest path. Every CSV column is declared in the manifest
// with a provenance tag (theory | monte-carlo | sgd) and units.
std::string run_recipe(const FigureRecipe& recipe, const std::string& out_dir,
                       std::uint64_t seed);

} // namespace sll
