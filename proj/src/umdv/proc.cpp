// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/proc.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace umdv {

namespace {

[[noreturn]] void child_exec(const std::vector<std::string>& argv, const RunOptions& opts,
                             int write_fd) {
    setpgid(0, 0);
    dup2(write_fd, STDOUT_FILENO);
    dup2(write_fd, STDERR_FILENO);
    if (write_fd != STDOUT_FILENO && write_fd != STDERR_FILENO)
        close(write_fd);

    if (opts.cwd && chdir(opts.cwd->c_str()) != 0) {
        std::fprintf(stderr, "cannot chdir to %s: %s\n", opts.cwd->c_str(), std::strerror(errno));
        _exit(127);
    }
    for (const auto& [key, value] : opts.env)
        setenv(key.c_str(), value.c_str(), 1);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv)
        cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    execvp(cargv[0], cargv.data());
    std::fprintf(stderr, "cannot execute %s: %s\n", cargv[0], std::strerror(errno));
    _exit(127);
}

}  // namespace

RunResult run_process(const std::vector<std::string>& argv, const RunOptions& opts) {
    if (argv.empty())
        throw Error("run_process: empty argument vector");

    int pipefd[2];
    if (pipe(pipefd) != 0)
        throw Error(std::string("pipe: ") + std::strerror(errno));

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw Error(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        close(pipefd[0]);
        child_exec(argv, opts, pipefd[1]);
    }

    close(pipefd[1]);
    fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

    RunResult result;
    auto deadline = start + opts.timeout;
    // Once killed, stop draining after a short grace period even if some
    // escaped descendant still holds the pipe open.
    auto hard_stop = deadline + std::chrono::seconds(2);
    bool eof = false;
    char buf[4096];

    while (!eof) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            if (now >= hard_stop)
                break;
        }
        long wait_ms = result.timed_out
                           ? 100
                           : std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                                     .count() +
                                 1;
        if (wait_ms > 500)
            wait_ms = 500;

        struct pollfd pfd = {pipefd[0], POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(wait_ms));
        if (rc > 0) {
            while (true) {
                ssize_t n = read(pipefd[0], buf, sizeof buf);
                if (n > 0) {
                    result.output.append(buf, static_cast<size_t>(n));
                } else if (n == 0) {
                    eof = true;
                    break;
                } else {
                    if (errno == EAGAIN || errno == EWOULDBLOCK)
                        break;
                    if (errno == EINTR)
                        continue;
                    eof = true;
                    break;
                }
            }
        }
    }
    close(pipefd[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);

    result.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

bool command_exists(const std::string& name) {
    if (name.find('/') != std::string::npos)
        return access(name.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path)
        return false;
    for (const auto& dir : split(path, ':')) {
        if (dir.empty())
            continue;
        fs::path candidate = fs::path(dir) / name;
        if (access(candidate.c_str(), X_OK) == 0)
            return true;
    }
    return false;
}

}  // namespace umdv
