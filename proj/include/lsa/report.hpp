#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace lsa {

struct CheckResult {
    std::string id;
    bool pass = true;
    std::size_t failures = 0;
    std::vector<std::string> witnesses;  // first few failures
};

// Aggregates named checks. Each id keeps its first witnesses; rendering is one
// "CHECK <id> PASS|FAIL [witness]" line per id in first-seen order.
class Report {
public:
    static constexpr std::size_t max_witnesses = 4;

    CheckResult& entry(const std::string& id) {
        for (auto& c : checks_)
            if (c.id == id) return c;
        checks_.push_back({id, true, 0, {}});
        return checks_.back();
    }

    void pass(const std::string& id) { entry(id); }

    void fail(const std::string& id, std::string witness) {
        auto& c = entry(id);
        c.pass = false;
        ++c.failures;
        if (c.witnesses.size() < max_witnesses) c.witnesses.push_back(std::move(witness));
    }

    template <class WitnessFn>
    bool check(const std::string& id, bool ok, WitnessFn&& witness) {
        if (ok) pass(id);
        else fail(id, witness());
        return ok;
    }

    void merge(const Report& o, const std::string& prefix = "") {
        for (const auto& c : o.checks_) {
            auto& e = entry(prefix + c.id);
            if (!c.pass) {
                e.pass = false;
                e.failures += c.failures;
                for (const auto& w : c.witnesses)
                    if (e.witnesses.size() < max_witnesses) e.witnesses.push_back(w);
            }
        }
    }

    bool ok() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return true;
    }
    bool ok(const std::string& id) const {
        for (const auto& c : checks_)
            if (c.id == id) return c.pass;
        return true;
    }
    bool has(const std::string& id) const {
        for (const auto& c : checks_)
            if (c.id == id) return true;
        return false;
    }
    const std::vector<CheckResult>& checks() const { return checks_; }

    std::string first_failure() const {
        for (const auto& c : checks_)
            if (!c.pass) return c.id + (c.witnesses.empty() ? "" : ": " + c.witnesses.front());
        return {};
    }

    std::string render() const {
        std::string out;
        for (const auto& c : checks_) {
            out += "CHECK " + c.id + (c.pass ? " PASS" : " FAIL");
            if (!c.pass && !c.witnesses.empty()) out += " " + c.witnesses.front();
            out += "\n";
        }
        return out;
    }

private:
    std::vector<CheckResult> checks_;
};

}  // namespace lsa
