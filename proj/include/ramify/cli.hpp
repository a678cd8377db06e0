#pragma once

#include <iosfwd>
#include <string>

#include "ramify/localfield.hpp"

namespace ramify {

// --precision flag > RAMIFY_PRECISION env > defaults
Precision resolve_precision(long long flag_value);

struct ReportOptions {
    long long precision = 0; // 0: resolve from env/defaults
    bool table = false;
    std::string out;
};

// exit codes: 0 success, 1 validation error, 2 precision exhausted
int cmd_report(const std::string& path, const ReportOptions& opt, std::ostream& os,
               std::ostream& es);
int cmd_check(const std::string& file, bool catalog, const std::string& suite,
              long long precision, std::ostream& os, std::ostream& es);
int cmd_catalog(bool list, const std::string& emit, const std::string& out, std::ostream& os,
                std::ostream& es);

int run_cli(int argc, char** argv);

} // namespace ramify
