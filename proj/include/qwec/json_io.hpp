#pragma once

#include <json.hpp>

#include "qwec/codec.hpp"
#include "qwec/error_model.hpp"

namespace qwec {

nlohmann::json to_json(const ErrorSpec& spec);
ErrorSpec error_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Session& s, const LogicalReadout& readout);

}  // namespace qwec
