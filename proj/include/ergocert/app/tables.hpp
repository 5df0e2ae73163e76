#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergocert/app/config.hpp"

namespace ergocert::app {

struct TableEntry {
    enum class Check { relative, absolute, exact, info };
    std::string label;
    double computed = 0.0;
    std::optional<double> published;
    Check check = Check::info;
    double tolerance = 0.0;

    /// |computed - published| / |published| for relative checks, |computed - published| otherwise.
    double deviation() const;
    bool ok() const;
};

struct Table {
    std::string name;   ///< file stem, e.g. "table2"
    std::string title;
    std::vector<TableEntry> entries;

    bool ok() const;
};

/// Published values for the worked random walk, recomputed from scratch.
Table table1(const ResolvedModel& m, const Tolerances& tol = {});
Table table2(const ResolvedModel& m, const Tolerances& tol = {});
Table table3a(const ResolvedModel& m, const Tolerances& tol = {});
Table table3b(const ResolvedModel& m, const Tolerances& tol = {});
std::vector<Table> all_tables(const ResolvedModel& m, const Tolerances& tol = {});

/// `format` is "csv" or "md".
void write_table(const Table& t, const std::string& format, std::ostream& out);

}  // namespace ergocert::app
