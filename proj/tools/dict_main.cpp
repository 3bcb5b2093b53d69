/*
 * Copyright (C) 2026 The 2D2FA Project Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// twod-dict: builds and exports a pattern dictionary, or checks one.

#include "twod/identifier.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"2D-2FA pattern dictionary tool"};
  twod::ids::DictionaryOptions options;
  std::string out_path, check_path;
  app.add_option("--length", options.length, "Pattern length")->check(CLI::Range(2, 9));
  app.add_option("--start", options.start_dot, "Start dot")->check(CLI::Range(1, 9));
  app.add_option("--min-distance", options.min_distance, "Minimum pairwise similarity distance");
  app.add_option("--max-size", options.max_size, "Upper bound on entries");
  app.add_option("--out", out_path, "Write here instead of stdout");
  app.add_option("--check", check_path, "Validate an exported dictionary file instead");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!check_path.empty()) {
      std::ifstream in(check_path);
      if (!in) throw std::runtime_error("cannot read " + check_path);
      std::stringstream text;
      text << in.rdbuf();
      const auto dict = twod::ids::import_dictionary(text.str(), options.min_distance);
      std::cout << dict.size() << " entries, pairwise distance >= " << dict.min_distance() << '\n';
      return 0;
    }
    const std::string text = twod::ids::export_dictionary(twod::ids::build_pattern_dictionary(options));
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      out << text;
      if (!out) throw std::runtime_error("cannot write " + out_path);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "twod-dict: " << e.what() << '\n';
    return 1;
  }
}
