#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "fairmatch/rational.hpp"
#include "fairmatch/valuation.hpp"

#include <nlohmann/json_fwd.hpp>

namespace fairmatch {

/// A loaded problem instance: market shape, valuation source, and the
/// declared low value a for binary profiles (report-only for the engines
/// that work on like-counts).
struct Instance {
    MarketShape shape;
    std::optional<Rat> a;
    std::shared_ptr<const Valuation> valuation;

    const Capabilities& capabilities() const { return valuation->capabilities(); }

    /// Parses the versioned instance JSON document.
    static Instance from_json(const nlohmann::json& doc);
    static Instance load(const std::filesystem::path& path);

    /// Serializes back to the instance JSON format. Dynamic valuations
    /// that are not table/script backed must be materialized first
    /// (see gen::materialize).
    nlohmann::json to_json() const;
    void save(const std::filesystem::path& path) const;
};

}  // namespace fairmatch
