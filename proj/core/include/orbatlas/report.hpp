#pragma once

#include <string>
#include <vector>

namespace orb {

/// Pass/fail outcome of one named check, with a witness string on failure.
struct CheckItem {
    std::string check;
    bool ok{true};
    std::string witness;
};

struct Report {
    std::vector<CheckItem> items;

    void pass(const std::string& check) { items.push_back({check, true, ""}); }
    void fail(const std::string& check, const std::string& witness) {
        items.push_back({check, false, witness});
    }
    void require(bool cond, const std::string& check, const std::string& witness) {
        if (cond) pass(check); else fail(check, witness);
    }
    void merge(const Report& other) {
        items.insert(items.end(), other.items.begin(), other.items.end());
    }

    bool ok() const {
        for (auto& it : items)
            if (!it.ok) return false;
        return true;
    }
    int failures() const {
        int n = 0;
        for (auto& it : items)
            if (!it.ok) ++n;
        return n;
    }
    std::string first_failure() const {
        for (auto& it : items)
            if (!it.ok) return it.check + ": " + it.witness;
        return "";
    }
};

} // namespace orb
