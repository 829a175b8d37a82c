#pragma once

// Runs the qenv binary through the shell and captures stdout and the exit status.

#include <sys/wait.h>

#include <cstdio>
#include <string>

#ifndef QENV_CLI
#error "QENV_CLI must be defined"
#endif

struct Run {
  int status = -1;
  std::string out;
};

inline Run run_cli(const std::string& args) {
  const std::string cmd = std::string(QENV_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}
