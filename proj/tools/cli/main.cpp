#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "job.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const commsim_cli::JobConfig config = commsim_cli::parse_config(args);
    commsim_cli::run_job(config);
    return 0;
  } catch (const commsim_cli::HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const commsim_cli::ConfigError& e) {
    std::cerr << "commsim: " << e.what() << "\n";
    return 2;
  } catch (const commsim_cli::RunError& e) {
    std::cerr << "commsim: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "commsim: " << e.what() << "\n";
    return 3;
  }
}
