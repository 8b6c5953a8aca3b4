#pragma once

// Experiment config files, INI syntax:
//
//   [experiment]
//   env = point_mass_sparse
//   variants = icem, cem_mpc
//   budgets = 50, 100, 300
//   seeds = 0-49
//   steps = 50
//   horizon = 30
//   beta = 2.5
//   workers = 4
//   out = sweep.csv
//
//   [optimizer]          ; any OptimizerConfig field
//   alpha = 0.1
//
//   [ablation]
//   features = colored_noise, keep_elites

#include <istream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "icem/harness/experiment.hpp"

namespace icem::harness {

inline void apply_config(ExperimentConfig& exp, const boost::property_tree::ptree& tree) {
  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      const std::string value = detail::trim(node.get_value<std::string>());
      const std::string where = section + "." + key;
      if (section == "optimizer") {
        PlannerConfig probe;
        apply_override(probe, key, value);
        exp.overrides[key] = value;
      } else if (section == "ablation" && key == "features") {
        exp.features = detail::split_list(value);
      } else if (section != "experiment") {
        throw ValidationError("config: unknown section '" + section + "'");
      } else if (key == "env") {
        exp.env = value;
      } else if (key == "variants" || key == "variant") {
        exp.variants.clear();
        for (const auto& v : detail::split_list(value)) exp.variants.push_back(parse_variant(v));
      } else if (key == "budgets" || key == "budget") {
        exp.budgets.clear();
        for (auto b : parse_index_list(value, where)) exp.budgets.push_back(b);
      } else if (key == "seeds") {
        exp.seeds = parse_index_list(value, where);
      } else if (key == "steps") {
        exp.episode_length = detail::parse_count(where, value);
      } else if (key == "horizon") {
        exp.horizon = static_cast<Eigen::Index>(detail::parse_count(where, value));
      } else if (key == "beta") {
        exp.beta = detail::parse_double(where, value);
      } else if (key == "workers") {
        exp.workers = detail::parse_count(where, value);
      } else if (key == "out") {
        exp.output_path = value;
      } else {
        throw ValidationError("config: unknown key '" + where + "'");
      }
    }
  }
}

inline void load_config(ExperimentConfig& exp, std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  apply_config(exp, tree);
}

inline void load_config(ExperimentConfig& exp, const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  apply_config(exp, tree);
}

}  // namespace icem::harness
