#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sb/errors.hpp"

namespace sb {

// One regression-pinned quantity: an independent way to compute it (closed
// form, exhaustive search, log-orbit recurrence), the implementation path it
// guards, and the agreement bound between the two.  Values are flat double
// vectors; complex results store as [re, im].
struct OracleEntry {
    std::string id;
    std::string description;
    double bound = 0.0;
    std::function<std::vector<double>()> oracle;  // independent route
    std::function<std::vector<double>()> main;    // implementation route
};

// built-in registry, ordered by id
const std::vector<OracleEntry>& oracle_registry();
const OracleEntry* find_oracle(const std::string& id);

// File-backed store of pinned values.  pin() recomputes both routes, demands
// agreement within the bound, and records the oracle's values; compare()
// recomputes only the implementation route and checks it against the record.
class OracleStore {
public:
    // a missing file is an empty store; a malformed one is an error
    explicit OracleStore(std::string path);

    bool empty() const { return pinned_.empty(); }
    bool has(const std::string& id) const { return pinned_.count(id) != 0; }
    std::vector<std::string> pinned_ids() const;

    void pin(const std::string& id);  // OracleMismatch when the routes disagree
    void pin_all();

    // EmptyInput when the value is not pinned yet (the message says to run
    // pin); OracleMismatch when the recomputed value drifted past the bound
    void compare(const std::string& id) const;
    void compare_all() const;

    void save() const;  // atomic write, sorted keys
    const std::string& path() const { return path_; }

private:
    struct Pinned {
        std::vector<double> values;
        double bound = 0.0;
        std::string description;
    };
    std::string path_;
    std::map<std::string, Pinned> pinned_;
};

} // namespace sb
