#pragma once

// Random small sensor designs for property tests: a pixel array (optionally
// binning in the charge domain), a column ADC bank, then a chain of up to
// three digital stages, each on its own unit behind its own memory.

#include <algorithm>
#include <random>
#include <string>

#include "json.hpp"

namespace test {

class DesignGen {
 public:
  explicit DesignGen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, int(v.size()) - 1))]; }

  nlohmann::json design(int max_side = 64, int max_stages = 4) {
    using nlohmann::json;
    int h = uniform(4, max_side), w = uniform(4, max_side);
    json stages = json::array();
    json mapping_stages = json::object();
    json memories = json::array(), units = json::array(), links = json::array();
    json mapping_links = json::object();

    stages.push_back({{"name", "input"}, {"kind", "PixelInput"},
                      {"input_size", {h, w, 1}}, {"output_size", {h, w, 1}}});
    mapping_stages["input"] = "pixel_array";
    const int pixels = h * w, ph = h, pw = w;
    std::string last = "input";

    // Optional charge-domain binning on the pixel array.
    if (max_stages > 1 && coin(0.4) && h >= 4 && w >= 4) {
      const int k = uniform(2, 3);
      const int oh = (h - k) / k + 1, ow = (w - k) / k + 1;
      stages.push_back(stencil("binning", last, {h, w}, {oh, ow}, k, k, k * k));
      mapping_stages["binning"] = "pixel_array";
      h = oh;
      w = ow;
      last = "binning";
    }
    const int adcs = pick(std::vector<int>{1, 2, w, std::max(1, w / 2)});

    json arrays = json::array();
    arrays.push_back({{"name", "pixel_array"}, {"layer", "sensor"},
                      {"num_input", {ph, pw, 1}}, {"num_output", {1, w, 1}},
                      {"components", {{{"kind", "APS"}, {"name", "aps"}, {"count", pixels}}}}});
    arrays.push_back({{"name", "adc_array"}, {"layer", "sensor"}, {"inputs", {"pixel_array"}},
                      {"num_input", {1, w, 1}}, {"num_output", {1, w, 1}},
                      {"components", {{{"kind", "ADC"}, {"name", "adc"}, {"count", adcs}}}}});

    const int used = static_cast<int>(stages.size());
    const int digital = uniform(0, std::min(3, max_stages - used));
    std::string feeder = "adc_array";
    for (int i = 0; i < digital; ++i) {
      const std::string name = "s" + std::to_string(i);
      const std::string unit = "u" + std::to_string(i);
      const bool final_stage = i + 1 == digital;
      const int choice = uniform(0, final_stage ? 3 : 2);
      json st;
      bool whole_frame = false;
      int rows_needed = 1;
      if (choice == 3) {
        st = dnn(name, last, {h, w});
        whole_frame = true;
      } else if (choice == 2) {
        st = {{"name", name}, {"kind", "ElementwiseBinary"}, {"predecessors", {last}},
              {"input_size", {h, w, 1}}, {"output_size", {h, w, 1}},
              {"kernel", {1, 1}}, {"stride", {1, 1}}, {"ops_per_window", uniform(1, 3)}};
        whole_frame = true;
      } else {
        const int k = std::min({uniform(1, 3), h, w});
        const int s = uniform(1, k);
        const int oh = (h - k) / s + 1, ow = (w - k) / s + 1;
        st = stencil(name, last, {h, w}, {oh, ow}, k, s, uniform(1, 9));
        rows_needed = k;
      }
      stages.push_back(st);
      mapping_stages[name] = unit;

      const bool systolic = st["kind"] == "DNNLayerList" && coin(0.7);
      const bool direct = i == 0 && !whole_frame && coin(0.15);
      std::string source = feeder;
      if (!direct) {
        const std::string mem = "m" + std::to_string(i);
        json m = {{"name", mem}, {"layer", "sensor"}, {"inputs", {feeder}},
                  {"ports", pick(std::vector<int>{2, 2, 3})},
                  {"read_energy", "1pJ"}, {"write_energy", "1.5pJ"}, {"leakage_power", "2uW"}};
        const int frame = h * w;
        if (!whole_frame && rows_needed > 1 && coin(0.6)) {
          const int rows = rows_needed + uniform(0, 1);
          m["kind"] = "LineBuffer";
          m["rows"] = rows;
          m["row_width"] = w;
          m["capacity"] = std::to_string(rows * w) + "B";
        } else if (coin(0.3)) {
          m["kind"] = "DoubleBuffer";
          m["capacity"] = std::to_string(2 * frame) + "B";
        } else {
          m["kind"] = "FIFO";
          m["capacity"] = std::to_string(whole_frame ? frame : uniform(frame / 2 + 1, frame)) + "B";
        }
        memories.push_back(m);
        source = mem;
      }
      const int p_in = pick(std::vector<int>{1, 1, 2, 4});
      const int p_out = pick(std::vector<int>{1, 2, 4});
      json u = {{"name", unit}, {"layer", "sensor"}, {"inputs", {source}},
                {"kind", systolic ? "SystolicArray" : "PipelinedAccelerator"},
                {"input_pixels_per_cycle", {1, p_in, 1}}, {"output_pixels_per_cycle", {1, p_out, 1}},
                {"num_stages", uniform(1, 4)}, {"energy_per_cycle", std::to_string(uniform(1, 9)) + "pJ"},
                {"clock", pick(std::vector<std::string>{"50MHz", "100MHz", "200MHz"})}};
      if (systolic) {
        u["rows"] = pick(std::vector<int>{2, 4, 8});
        u["cols"] = pick(std::vector<int>{2, 4, 8});
      }
      units.push_back(u);
      feeder = unit;
      last = name;
      const auto& out = st["output_size"];
      h = out[0].get<int>();
      w = out[1].get<int>();
    }

    links.push_back({{"name", "mipi"}, {"kind", "MIPI"}, {"source", feeder}});
    mapping_links[last] = "mipi";

    return {{"globals", {{"name", "random"}}},
            {"software", {{"stages", stages}}},
            {"hardware", {{"layers", {{{"name", "sensor"}, {"process_node", "65nm"}, {"area", "1mm2"}}}},
                          {"analog_arrays", arrays},
                          {"memories", memories},
                          {"digital_units", units},
                          {"links", links}}},
            {"mapping", {{"stages", mapping_stages}, {"links", mapping_links}}}};
  }

 private:
  static nlohmann::json stencil(const std::string& name, const std::string& pred,
                                std::pair<int, int> in, std::pair<int, int> out, int k, int s,
                                int ops) {
    return {{"name", name}, {"kind", "Stencil"}, {"predecessors", {pred}},
            {"input_size", {in.first, in.second, 1}}, {"output_size", {out.first, out.second, 1}},
            {"kernel", {k, k}}, {"stride", {s, s}}, {"ops_per_window", ops}};
  }

  nlohmann::json dnn(const std::string& name, const std::string& pred, std::pair<int, int> in) {
    nlohmann::json layers = nlohmann::json::array();
    const int n = uniform(1, 3);
    std::vector<int> out;
    for (int l = 0; l < n; ++l) {
      out = {uniform(1, 4), uniform(1, 4), uniform(1, 8)};
      layers.push_back({{"output", out}, {"macs_per_output", uniform(1, 64)}});
    }
    return {{"name", name}, {"kind", "DNNLayerList"}, {"predecessors", {pred}},
            {"input_size", {in.first, in.second, 1}}, {"output_size", out}, {"layers", layers}};
  }

  std::mt19937_64 rng_;
};

}  // namespace test
