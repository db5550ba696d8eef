#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mot {

/// Ordered set of named tracker parameters. Each entry keeps the authors'
/// default next to the current value so a tuner can sample around it.
class ParamSet {
public:
    struct Entry {
        std::string name;
        double def = 0.0;
        double current = 0.0;
        bool integral = false;
    };

    ParamSet& add(const std::string& name, double def, bool integral = false) {
        if (find(name) >= 0) throw std::invalid_argument("ParamSet: duplicate parameter " + name);
        entries_.push_back(Entry{name, def, def, integral});
        return *this;
    }

    bool has(const std::string& name) const { return find(name) >= 0; }

    double get(const std::string& name) const { return at(name).current; }

    int get_int(const std::string& name) const {
        return static_cast<int>(std::lround(at(name).current));
    }

    void set(const std::string& name, double value) {
        if (!std::isfinite(value))
            throw std::invalid_argument("ParamSet: non-finite value for " + name);
        Entry& e = at(name);
        e.current = e.integral ? static_cast<double>(std::lround(value)) : value;
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }

private:
    int find(const std::string& name) const {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].name == name) return static_cast<int>(i);
        return -1;
    }
    const Entry& at(const std::string& name) const {
        int i = find(name);
        if (i < 0) throw std::invalid_argument("ParamSet: unknown parameter " + name);
        return entries_[static_cast<std::size_t>(i)];
    }
    Entry& at(const std::string& name) {
        int i = find(name);
        if (i < 0) throw std::invalid_argument("ParamSet: unknown parameter " + name);
        return entries_[static_cast<std::size_t>(i)];
    }

    std::vector<Entry> entries_;
};

}  // namespace mot
