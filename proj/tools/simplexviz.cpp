#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "simplexviz/cli.hpp"

int main(int argc, char** argv) {
  using simplexviz::cli::Command;
  using simplexviz::cli::Format;
  using simplexviz::cli::RunConfig;

  CLI::App app{"simplexviz: n-simplex and 2-simplex prism figures from LNS listings"};
  app.require_subcommand(1);

  RunConfig config;
  std::string output;
  std::string format;
  double azimuth = 0.0;
  double elevation = 0.0;

  // Every subcommand accepts the full option set; options a command does not use are ignored.
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", config.input, "input file")->required();
    sub->add_option("-o,--output", output, "output path");
    sub->add_option("--width", config.width, "image width in px")->check(CLI::Range(64, 100000));
    sub->add_option("--height", config.height, "image height in px")->check(CLI::Range(64, 100000));
    sub->add_option("--format", format, "svg or png")->check(CLI::IsMember({"svg", "png"}));
    sub->add_option("--azimuth", azimuth, "camera azimuth in degrees");
    sub->add_option("--elevation", elevation, "camera elevation in degrees");
    sub->add_option("--prism-length", config.prism_length, "prism length in scene units")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* render = app.add_subcommand("render", "render an .lns listing to SVG or PNG");
  add_common(render);
  CLI::App* validate = app.add_subcommand("validate", "check an .lns listing and report scene diagnostics");
  add_common(validate);
  CLI::App* inspect = app.add_subcommand("inspect", "print per-point geometry of an .lns listing as JSON");
  add_common(inspect);
  CLI::App* from_csv = app.add_subcommand("from-csv", "convert a CSV time series into prism listings");
  add_common(from_csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : simplexviz::cli::kExitInput;
  }

  if (!output.empty()) config.output = output;
  if (format == "svg") config.format = Format::Svg;
  if (format == "png") config.format = Format::Png;
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--azimuth") > 0) config.azimuth_deg = azimuth;
  if (chosen->count("--elevation") > 0) config.elevation_deg = elevation;

  const std::map<CLI::App*, Command> commands{
      {render, Command::Render}, {validate, Command::Validate}, {inspect, Command::Inspect}, {from_csv, Command::FromCsv}};
  config.command = commands.at(chosen);
  return simplexviz::cli::run(config);
}
