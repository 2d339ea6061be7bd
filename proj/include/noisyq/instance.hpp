#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include <json.hpp>

namespace noisyq {

// Hidden bit vector theta in {0,1}^K. Item indices are 1-based.
class BitInstance {
  public:
    explicit BitInstance(std::vector<int> bits) : bits_(std::move(bits)) {
        if (bits_.empty()) throw std::invalid_argument("BitInstance: K >= 1 required");
        for (int b : bits_) {
            if (b != 0 && b != 1) throw std::invalid_argument("BitInstance: entries must be 0/1");
        }
    }

    int size() const { return static_cast<int>(bits_.size()); }
    int bit(int k) const {  // k in [1, K]
        if (k < 1 || k > size()) throw std::out_of_range("BitInstance: index out of range");
        return bits_[static_cast<std::size_t>(k - 1)];
    }
    const std::vector<int>& bits() const { return bits_; }

    int or_value() const {
        return std::any_of(bits_.begin(), bits_.end(), [](int b) { return b == 1; }) ? 1 : 0;
    }

  private:
    std::vector<int> bits_;
};

// True total order of K distinct items, stored as ranks: rank(i) in [1, K],
// larger rank = larger item. Only relative order matters for comparisons.
class RankInstance {
  public:
    explicit RankInstance(std::vector<int> ranks) : ranks_(std::move(ranks)) {
        if (ranks_.empty()) throw std::invalid_argument("RankInstance: K >= 1 required");
        std::vector<int> seen(ranks_.size(), 0);
        for (int r : ranks_) {
            if (r < 1 || r > size() || seen[static_cast<std::size_t>(r - 1)]++) {
                throw std::invalid_argument("RankInstance: not a permutation of [K]");
            }
        }
    }

    static RankInstance identity(int k) {
        std::vector<int> r(static_cast<std::size_t>(k));
        std::iota(r.begin(), r.end(), 1);
        return RankInstance(std::move(r));
    }

    int size() const { return static_cast<int>(ranks_.size()); }
    int rank(int i) const {  // i in [1, K]
        if (i < 1 || i > size()) throw std::out_of_range("RankInstance: index out of range");
        return ranks_[static_cast<std::size_t>(i - 1)];
    }
    const std::vector<int>& ranks() const { return ranks_; }

    // Index of the largest item.
    int argmax() const {
        return 1 + static_cast<int>(std::max_element(ranks_.begin(), ranks_.end()) - ranks_.begin());
    }

    // Item indices in ascending order of value.
    std::vector<int> ascending_order() const {
        std::vector<int> order(static_cast<std::size_t>(size()));
        for (int i = 1; i <= size(); ++i) order[static_cast<std::size_t>(rank(i) - 1)] = i;
        return order;
    }

  private:
    std::vector<int> ranks_;
};

// A target X strictly between sorted elements: target_slot = i means
// X_i < X < X_{i+1}, with sentinels X_0 = -inf, X_{K+1} = +inf.
class SearchInstance {
  public:
    SearchInstance(int k, int target_slot) : k_(k), slot_(target_slot) {
        if (k < 1) throw std::invalid_argument("SearchInstance: K >= 1 required");
        if (target_slot < 0 || target_slot > k) {
            throw std::invalid_argument("SearchInstance: target_slot must be in [0, K]");
        }
    }

    int size() const { return k_; }
    int target_slot() const { return slot_; }

  private:
    int k_;
    int slot_;
};

using Instance = std::variant<BitInstance, RankInstance, SearchInstance>;

inline int instance_size(const Instance& inst) {
    return std::visit([](const auto& x) { return x.size(); }, inst);
}

// JSON layout: {"kind":"bits"|"ranks"|"search","data":[...],"p":...,"seed":...}
// "data" is the bit vector, the rank vector, or [K, target_slot].
struct InstanceDoc {
    Instance instance;
    double p = 0.0;
    std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const InstanceDoc& doc) {
    nlohmann::json j;
    if (const auto* b = std::get_if<BitInstance>(&doc.instance)) {
        j["kind"] = "bits";
        j["data"] = b->bits();
    } else if (const auto* r = std::get_if<RankInstance>(&doc.instance)) {
        j["kind"] = "ranks";
        j["data"] = r->ranks();
    } else {
        const auto& s = std::get<SearchInstance>(doc.instance);
        j["kind"] = "search";
        j["data"] = {s.size(), s.target_slot()};
    }
    j["p"] = doc.p;
    j["seed"] = doc.seed;
    return j;
}

inline InstanceDoc instance_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double p = j.at("p").get<double>();
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    if (kind == "bits") {
        return {BitInstance(j.at("data").get<std::vector<int>>()), p, seed};
    }
    if (kind == "ranks") {
        return {RankInstance(j.at("data").get<std::vector<int>>()), p, seed};
    }
    if (kind == "search") {
        auto d = j.at("data").get<std::vector<int>>();
        if (d.size() != 2) throw std::invalid_argument("search data must be [K, target_slot]");
        return {SearchInstance(d[0], d[1]), p, seed};
    }
    throw std::invalid_argument("unknown instance kind: " + kind);
}

}  // namespace noisyq
