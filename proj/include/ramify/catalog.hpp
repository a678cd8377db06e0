#pragma once

#include <string>
#include <vector>

#include "ramify/extension.hpp"

namespace ramify {

struct CatalogEntry {
    std::string name;
    std::string summary;
};

std::vector<CatalogEntry> catalog_list();
ExtensionSpec catalog_spec(const std::string& name, Precision prec = {});

} // namespace ramify
