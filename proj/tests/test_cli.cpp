#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatnet/io.hpp"
#include "scatnet/random.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "scatnet_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CliResult run_cli(const std::string& args) {
  const auto log = work_dir() / "cli_output.txt";
  const std::string cmd =
      std::string(SCATNET_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(log)};
}

std::string path_of(const std::string& name) {
  return (work_dir() / name).string();
}

}  // namespace

TEST_CASE("init writes valid pairing models deterministically") {
  const auto model = path_of("pairing.json");
  auto r = run_cli("init --dims 4,2,1 --scheme pairing --seed 1 --out " + model);
  CHECK(r.code == 0);

  const auto net = scatnet::io::load_model(model);
  CHECK(net.depth() == 2);
  CHECK(net.dim(0) == 4);
  CHECK(net.dim(2) == 1);
  for (const auto& layer : net.layers()) {
    CHECK(layer.op.frame_residual() == 0.0);
    CHECK((layer.op.psi_real().array() == 0.0 || layer.op.psi_real().array() == 1.0).all());
  }

  const auto again = path_of("pairing2.json");
  run_cli("init --dims 4,2,1 --scheme pairing --seed 1 --out " + again);
  CHECK(slurp(model) == slurp(again));
}

TEST_CASE("init rejects impossible dimension chains with exit 2") {
  auto r = run_cli("init --dims 4,1 --scheme random --seed 0 --out " + path_of("x.json"));
  CHECK(r.code == 2);
  CHECK(r.output.find("layer 1") != std::string::npos);

  r = run_cli("init --dims 6,2 --scheme pairing --seed 0 --out " + path_of("x.json"));
  CHECK(r.code == 2);
}

TEST_CASE("init random models are seed-deterministic") {
  const auto a = path_of("rand_a.json");
  const auto b = path_of("rand_b.json");
  CHECK(run_cli("init --dims 8,8,8 --scheme random --seed 1 --out " + a).code == 0);
  CHECK(run_cli("init --dims 8,8,8 --scheme random --seed 1 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(scatnet::io::load_model(a).depth() == 2);

  const auto c = path_of("rand_c.json");
  CHECK(run_cli("init --dims 8,8,8 --scheme random --seed 2 --out " + c).code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("train-unsup learns from CSV and prints traces") {
  const auto data = path_of("train.csv");
  scatnet::io::atomic_write_text(data, "1,1,0,0\n0,0,1,1\n");
  const auto model = path_of("trained.json");

  auto r = run_cli("train-unsup --data " + data + " --dims 4,2 --seed 3 --out " + model);
  CHECK(r.code == 0);
  CHECK(r.output.find("layer 1 objective trace:") != std::string::npos);
  CHECK(scatnet::io::load_model(model).depth() == 1);

  SUBCASE("training is deterministic per seed") {
    const auto model2 = path_of("trained2.json");
    run_cli("train-unsup --data " + data + " --dims 4,2 --seed 3 --out " + model2);
    CHECK(slurp(model) == slurp(model2));
  }

  SUBCASE("empty datasets exit 2") {
    const auto empty = path_of("empty.csv");
    scatnet::io::atomic_write_text(empty, "");
    CHECK(run_cli("train-unsup --data " + empty + " --dims 4,2 --seed 0 --out " +
                  path_of("y.json")).code == 2);
  }
}

TEST_CASE("transform emits concatenated layers with a layout sidecar") {
  const auto model = path_of("t_model.json");
  REQUIRE(run_cli("init --dims 2,1 --scheme pairing --blocks full,full --seed 0 --out " +
                  model).code == 0);

  const auto data = path_of("t_data.csv");
  scatnet::io::atomic_write_text(data, "3,4\n");

  const auto out = path_of("t_scat.csv");
  auto r = run_cli("transform --model " + model + " --data " + data +
                   " --out " + out + " --emit autilde");
  REQUIRE(r.code == 0);

  const auto rows = scatnet::io::load_dataset(out);
  REQUIRE(rows.cols() == 3);  // N_0 + N_1 = 2 + 1
  CHECK(rows(0, 0) == 3.5);
  CHECK(rows(0, 1) == 3.5);
  CHECK(rows(0, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(slurp(out + ".layout") == "layer,offset,length\n0,0,2\n1,2,1\n");

  SUBCASE("utilde emits the raw layer path") {
    const auto out_u = path_of("t_scat_u.csv");
    REQUIRE(run_cli("transform --model " + model + " --data " + data +
                    " --out " + out_u + " --emit utilde").code == 0);
    const auto raw = scatnet::io::load_dataset(out_u);
    CHECK(raw(0, 0) == 3.0);
    CHECK(raw(0, 1) == 4.0);
    CHECK(raw(0, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
}

TEST_CASE("singleton models make autilde and utilde coincide") {
  const auto model = path_of("s_model.json");
  REQUIRE(run_cli("init --dims 2,1 --scheme pairing --blocks singleton,full --seed 0 "
                  "--out " + model).code == 0);
  const auto data = path_of("s_data.csv");
  scatnet::io::atomic_write_text(data, "3,4\n1,-2\n");

  const auto a = path_of("s_a.csv");
  const auto u = path_of("s_u.csv");
  REQUIRE(run_cli("transform --model " + model + " --data " + data + " --out " + a +
                  " --emit autilde").code == 0);
  REQUIRE(run_cli("transform --model " + model + " --data " + data + " --out " + u +
                  " --emit utilde").code == 0);
  CHECK(slurp(a) == slurp(u));

  const auto rows = scatnet::io::load_dataset(a);
  CHECK(rows(0, 2) == 0.0);  // residual vanishes beyond m = 0
  CHECK(rows(1, 2) == 0.0);
}

TEST_CASE("transform rows conserve energy against the raw data") {
  const auto model = path_of("e_model.json");
  REQUIRE(run_cli("init --dims 6,4,3 --scheme random --blocks size:2,size:2,full "
                  "--seed 5 --out " + model).code == 0);

  auto rng = scatnet::make_rng(55);
  Eigen::MatrixXd data(8, 6);
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    data.row(i) = scatnet::gaussian_vector(rng, 6).transpose();
  const auto data_path = path_of("e_data.csv");
  scatnet::io::save_dataset(data_path, data);

  const auto a = path_of("e_a.csv");
  const auto u = path_of("e_u.csv");
  REQUIRE(run_cli("transform --model " + model + " --data " + data_path + " --out " + a +
                  " --emit autilde").code == 0);
  REQUIRE(run_cli("transform --model " + model + " --data " + data_path + " --out " + u +
                  " --emit utilde").code == 0);

  const auto avg = scatnet::io::load_dataset(a);
  const auto raw = scatnet::io::load_dataset(u);
  // layout: layer 0 at 0..5, layer 1 at 6..9, layer 2 at 10..12
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double energy = avg.row(i).segment(0, 6).squaredNorm() +
                          avg.row(i).segment(6, 4).squaredNorm() +
                          raw.row(i).segment(10, 3).squaredNorm();
    CHECK(std::abs(energy - data.row(i).squaredNorm()) <=
          1e-10 * data.row(i).squaredNorm());
  }
}

TEST_CASE("gen-synthetic samples declared mixtures") {
  const auto spec = path_of("dist.json");

  SUBCASE("the +/-(1,1) empirical mean concentrates near zero") {
    scatnet::io::atomic_write_text(
        spec, R"({"atoms": [[1,1],[-1,-1]], "probs": [0.5,0.5], "count": 10000})");
    const auto out = path_of("gen.csv");
    REQUIRE(run_cli("gen-synthetic --spec " + spec + " --seed 7 --out " + out).code == 0);
    const auto rows = scatnet::io::load_dataset(out);
    REQUIRE(rows.rows() == 10000);
    REQUIRE(rows.cols() == 2);
    const double sigma = 1.0 / std::sqrt(10000.0);  // per-coordinate std of the mean
    CHECK(std::abs(rows.col(0).mean()) <= 5.0 * sigma);
    CHECK(std::abs(rows.col(1).mean()) <= 5.0 * sigma);

    const auto out2 = path_of("gen2.csv");
    REQUIRE(run_cli("gen-synthetic --spec " + spec + " --seed 7 --out " + out2).code == 0);
    CHECK(slurp(out) == slurp(out2));
  }

  SUBCASE("single atoms give constant rows") {
    scatnet::io::atomic_write_text(spec, R"({"atoms": [[2,3]], "probs": [1.0]})");
    const auto out = path_of("gen_const.csv");
    REQUIRE(run_cli("gen-synthetic --spec " + spec + " --count 25 --seed 1 --out " +
                    out).code == 0);
    const auto rows = scatnet::io::load_dataset(out);
    REQUIRE(rows.rows() == 25);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      CHECK(rows(i, 0) == 2.0);
      CHECK(rows(i, 1) == 3.0);
    }
  }

  SUBCASE("bad probabilities exit 2") {
    scatnet::io::atomic_write_text(spec, R"({"atoms": [[1],[2]], "probs": [0.6,0.5]})");
    CHECK(run_cli("gen-synthetic --spec " + spec + " --seed 0 --out " +
                  path_of("g.csv")).code == 2);
  }
}

TEST_CASE("fit-classes and classify round-trip through files") {
  const auto model = path_of("c_model.json");
  REQUIRE(run_cli("init --dims 2,1 --scheme pairing --blocks singleton,full --seed 0 "
                  "--out " + model).code == 0);

  const auto train = path_of("c_train.csv");
  scatnet::io::atomic_write_text(train, "1,0,0\n-1,0,1\n");  // label in column 3

  const auto templates = path_of("c_templates.json");
  auto r = run_cli("fit-classes --model " + model + " --data " + train +
                   " --label-col 3 --out " + templates);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("class 0") != std::string::npos);

  SUBCASE("training singletons are recalled exactly") {
    const auto pred = path_of("c_pred.csv");
    r = run_cli("classify --model " + model + " --templates " + templates +
                " --data " + train + " --label-col 3 --out " + pred);
    REQUIRE(r.code == 0);
    CHECK(r.output.find("accuracy 1") != std::string::npos);
    CHECK(slurp(pred) == "0\n1\n");
  }

  SUBCASE("ties pick the smaller class index") {
    const auto test = path_of("c_tie.csv");
    scatnet::io::atomic_write_text(test, "0,0\n");
    const auto pred = path_of("c_tie_pred.csv");
    r = run_cli("classify --model " + model + " --templates " + templates +
                " --data " + test + " --out " + pred);
    REQUIRE(r.code == 0);
    CHECK(slurp(pred) == "0\n");
  }

  SUBCASE("unknown labels in the test data exit 2") {
    const auto test = path_of("c_unknown.csv");
    scatnet::io::atomic_write_text(test, "1,0,7\n");
    r = run_cli("classify --model " + model + " --templates " + templates +
                " --data " + test + " --label-col 3 --out " + path_of("p.csv"));
    CHECK(r.code == 2);
    CHECK(r.output.find("7") != std::string::npos);
  }
}

TEST_CASE("classification pipeline reaches 0.9 accuracy end to end") {
  const auto spec = path_of("mix.json");
  scatnet::io::atomic_write_text(spec, R"({
    "count": 300,
    "classes": [
      {"label": 0, "prior": 0.5, "atoms": [[2.1,1.9,0,0],[1.9,2.1,0,0]], "probs": [0.5,0.5]},
      {"label": 1, "prior": 0.5, "atoms": [[0,0,2.1,1.9],[0,0,1.9,2.1]], "probs": [0.5,0.5]}
    ]})");

  const auto train = path_of("mix_train.csv");
  const auto test = path_of("mix_test.csv");
  REQUIRE(run_cli("gen-synthetic --spec " + spec + " --seed 11 --out " + train).code == 0);
  REQUIRE(run_cli("gen-synthetic --spec " + spec + " --count 200 --seed 12 --out " +
                  test).code == 0);

  const auto model = path_of("mix_model.json");
  REQUIRE(run_cli("init --dims 4,2 --scheme random --blocks size:2,full --seed 2 --out " +
                  model).code == 0);

  const auto templates = path_of("mix_templates.json");
  REQUIRE(run_cli("fit-classes --model " + model + " --data " + train +
                  " --label-col 5 --out " + templates).code == 0);

  const auto pred = path_of("mix_pred.csv");
  auto r = run_cli("classify --model " + model + " --templates " + templates +
                   " --data " + test + " --label-col 5 --out " + pred);
  REQUIRE(r.code == 0);

  const auto pos = r.output.find("accuracy ");
  REQUIRE(pos != std::string::npos);
  const double accuracy = std::stod(r.output.substr(pos + 9));
  CHECK(accuracy >= 0.9);
}

TEST_CASE("verify runs the quick suite cleanly") {
  auto r = run_cli("verify --seed 0 --level quick");
  CHECK(r.code == 0);
  CHECK(r.output.find("PROPERTY energy_conservation PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);

  SUBCASE("reports are deterministic per seed") {
    const auto again = run_cli("verify --seed 0 --level quick");
    CHECK(again.output == r.output);
  }
}

TEST_CASE("verify flags corrupted models with exit 1") {
  const auto model = path_of("v_model.json");
  REQUIRE(run_cli("init --dims 4,2,1 --scheme pairing --blocks full,full,full --seed 0 "
                  "--out " + model).code == 0);

  auto doc = nlohmann::json::parse(slurp(model));
  for (auto& layer : doc["layers"]) {
    for (auto& v : layer["psi_real"]) v = 2.0 * v.get<double>();
    for (auto& v : layer["psi_imag"]) v = 2.0 * v.get<double>();
  }
  const auto bad = path_of("v_bad.json");
  scatnet::io::atomic_write_text(bad, doc.dump());

  const auto r = run_cli("verify --model " + bad);
  CHECK(r.code == 1);
  CHECK(r.output.find("model_frame_check FAIL") != std::string::npos);
  CHECK(r.output.find("model_energy_conservation FAIL") != std::string::npos);
  CHECK(r.output.find("model_contractivity FAIL") != std::string::npos);

  const auto good = run_cli("verify --model " + model);
  CHECK(good.code == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("transform --model missing.json --data also_missing.csv --out x.csv")
            .code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("init --dims abc --out x.json").code == 2);
  CHECK(run_cli("--help").code == 0);
}
