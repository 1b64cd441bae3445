#pragma once

#include <string>

namespace cerg::cli {

struct RunOptions {
    bool no_governor = false;
    std::string out_dir;  ///< overrides env and scenario file when set
    bool plots = false;
};

/// Exit codes shared by all commands: 0 success, 2 configuration or parse
/// error, 3 numerical failure (with partial artifacts written).
int cmd_run(const std::string& path, const RunOptions& options);
int cmd_compare(const std::string& path, const std::string& out_dir);
int cmd_validate(const std::string& path);

}  // namespace cerg::cli
