#include "crashgp/model_io.hpp"

#include <json.hpp>

#include "crashgp/error.hpp"

namespace crashgp {

using nlohmann::json;

namespace {

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

std::string serialize_model(const GpModel& model) {
  if (!model.trained()) throw Error(ErrorKind::State, "cannot serialize an untrained model");
  const auto& p = model.params();
  const auto& fc = model.fit_config();
  json training = json::array();
  for (const auto& t : model.training())
    training.push_back({{"case", t.case_id},
                        {"torso_angle_deg", t.input.torso_angle_deg},
                        {"dring_z", t.input.dring_z},
                        {"output", t.output}});
  json doc = {
      {"format", "crashgp-model"},
      {"schema_version", kModelSchemaVersion},
      {"metric", std::string(to_string(model.metric()))},
      {"box",
       {{"torso_angle_deg", interval_json(model.box().torso_angle)},
        {"dring_z", interval_json(model.box().dring_z)}}},
      {"kernel",
       {{"family", "matern"},
        {"smoothness", std::string(to_string(p.smoothness))},
        {"signal_variance", p.signal_variance},
        {"lengthscales", json::array({p.lengthscales[0], p.lengthscales[1]})},
        {"noise_variance", p.noise_variance}}},
      {"output_transform", {{"offset", model.transform().offset}, {"scale", model.transform().scale}}},
      {"jitter", model.jitter()},
      {"log_marginal_likelihood", model.log_marginal_likelihood()},
      {"fit_config",
       {{"smoothness", std::string(to_string(fc.smoothness))},
        {"restarts", fc.restarts},
        {"seed", fc.seed},
        {"lengthscale_bounds", interval_json(fc.lengthscale)},
        {"signal_variance_bounds", interval_json(fc.signal_variance)},
        {"noise_variance_bounds", interval_json(fc.noise_variance)},
        {"center_outputs", fc.center_outputs},
        {"max_evaluations", fc.max_evaluations}}},
      {"training", training},
  };
  return doc.dump(2) + "\n";
}

GpModel deserialize_model(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "crashgp-model")
      throw Error(ErrorKind::Parse, "not a crashgp model document");
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion)
      throw Error(ErrorKind::Parse, "unsupported model schema version");
    auto metric = parse_metric(doc.at("metric").get<std::string>());
    if (!metric) throw Error(ErrorKind::Parse, "unknown metric in model document");

    DesignBox box{interval_from(doc.at("box").at("torso_angle_deg")),
                  interval_from(doc.at("box").at("dring_z"))};

    const json& k = doc.at("kernel");
    KernelParams params;
    auto smooth = parse_smoothness(k.at("smoothness").get<std::string>());
    if (!smooth) throw Error(ErrorKind::Parse, "unknown smoothness in model document");
    params.smoothness = *smooth;
    params.signal_variance = k.at("signal_variance").get<double>();
    params.lengthscales = {k.at("lengthscales").at(0).get<double>(),
                           k.at("lengthscales").at(1).get<double>()};
    params.noise_variance = k.at("noise_variance").get<double>();

    OutputTransform transform{doc.at("output_transform").at("offset").get<double>(),
                              doc.at("output_transform").at("scale").get<double>()};

    const json& f = doc.at("fit_config");
    FitConfig fc;
    auto fsmooth = parse_smoothness(f.at("smoothness").get<std::string>());
    if (!fsmooth) throw Error(ErrorKind::Parse, "unknown smoothness in fit config");
    fc.smoothness = *fsmooth;
    fc.restarts = f.at("restarts").get<unsigned>();
    fc.seed = f.at("seed").get<std::uint64_t>();
    fc.lengthscale = interval_from(f.at("lengthscale_bounds"));
    fc.signal_variance = interval_from(f.at("signal_variance_bounds"));
    fc.noise_variance = interval_from(f.at("noise_variance_bounds"));
    fc.center_outputs = f.at("center_outputs").get<bool>();
    fc.max_evaluations = f.at("max_evaluations").get<int>();

    std::vector<TrainingPoint> training;
    for (const auto& t : doc.at("training"))
      training.push_back({t.at("case").get<int>(),
                          {t.at("torso_angle_deg").get<double>(), t.at("dring_z").get<double>()},
                          t.at("output").get<double>()});

    return GpModel::condition(*metric, box, std::move(training), params, transform, fc,
                              doc.at("jitter").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed model document: ") + e.what());
  }
}

void save_model(const GpModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

GpModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_text_file(path));
}

}  // namespace crashgp
