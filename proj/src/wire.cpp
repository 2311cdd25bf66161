#include "bvm/wire.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

namespace bvm {

Kernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("kernel must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "rates") throw std::invalid_argument("unknown field '" + key + "' in kernel");
  }
  if (!j.contains("rates") || !j.at("rates").is_object())
    throw std::invalid_argument("kernel requires a 'rates' object");

  std::map<std::int64_t, double> rates;
  for (const auto& [key, value] : j.at("rates").items()) {
    std::int64_t k = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
    if (ec != std::errc{} || ptr != key.data() + key.size())
      throw std::invalid_argument("kernel displacement key '" + key +
                                  "' is not a signed decimal integer");
    if (k == 0) throw std::invalid_argument("displacement zero not allowed");
    if (!value.is_number()) throw std::invalid_argument("kernel rate for '" + key + "' must be a number");
    if (rates.count(k)) throw std::invalid_argument("duplicate kernel displacement '" + key + "'");
    rates[k] = value.get<double>();
  }
  return Kernel::from_rates(rates);
}

nlohmann::json kernel_to_json(const Kernel& kernel) {
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [k, a] : kernel.entries()) rates[std::to_string(k)] = a;
  return nlohmann::json{{"rates", rates}};
}

}  // namespace bvm
