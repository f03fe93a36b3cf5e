#include "qcest/povm_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qcest {

namespace {

using nlohmann::ordered_json;

ordered_json require_field(const ordered_json& j, const char* field, const std::string& where) {
  if (!j.contains(field)) {
    throw std::runtime_error("povm file: missing field '" + std::string(field) + "' in " + where);
  }
  return j.at(field);
}

}  // namespace

std::string povm_to_json(const Povm& povm) {
  ordered_json root;
  root["dimension"] = povm.d();
  root["copies"] = povm.copies();
  ordered_json points = ordered_json::array();
  for (int mu = 0; mu < povm.size(); ++mu) {
    ordered_json point;
    point["weight"] = povm.weight(mu);
    ordered_json amps = ordered_json::array();
    for (int k = 0; k < povm.d(); ++k) {
      const Complex a = povm.candidate(mu).amplitude(k);
      amps.push_back(ordered_json::array({a.real(), a.imag()}));
    }
    point["amplitudes"] = std::move(amps);
    points.push_back(std::move(point));
  }
  root["points"] = std::move(points);
  return root.dump(2) + "\n";
}

Povm povm_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("povm file: JSON parse error: ") + e.what());
  }

  const int d = require_field(root, "dimension", "root").get<int>();
  const int copies = require_field(root, "copies", "root").get<int>();
  const ordered_json points = require_field(root, "points", "root");
  if (!points.is_array() || points.empty()) {
    throw std::runtime_error("povm file: 'points' must be a nonempty array");
  }

  std::vector<FramePoint> frame_points;
  frame_points.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::ostringstream where;
    where << "points[" << i << "]";
    const ordered_json& p = points[i];
    const double weight = require_field(p, "weight", where.str()).get<double>();
    const ordered_json amps = require_field(p, "amplitudes", where.str());
    if (!amps.is_array() || static_cast<int>(amps.size()) != d) {
      throw std::runtime_error("povm file: 'amplitudes' in " + where.str() + " must list " +
                               std::to_string(d) + " complex entries");
    }
    Vector v(d);
    for (int k = 0; k < d; ++k) {
      const ordered_json& entry = amps[static_cast<std::size_t>(k)];
      if (!entry.is_array() || entry.size() != 2) {
        throw std::runtime_error("povm file: amplitude " + std::to_string(k) + " in " +
                                 where.str() + " must be a [re, im] pair");
      }
      v(k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
    frame_points.push_back({PureState(std::move(v)), weight});
  }
  return Povm(d, copies, std::move(frame_points));
}

void povm_save(const Povm& povm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << povm_to_json(povm);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Povm povm_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return povm_from_json(buffer.str());
}

}  // namespace qcest
