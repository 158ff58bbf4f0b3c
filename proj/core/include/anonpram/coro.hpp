#pragma once

#include <coroutine>
#include <exception>
#include <utility>

namespace anonpram {

/// Top-level coroutine for one simulated processor. Lazily started; the
/// engine resumes it once per round at the processor's pending operation.
class ProcTask {
public:
    struct promise_type {
        std::exception_ptr exception;

        ProcTask get_return_object() {
            return ProcTask{std::coroutine_handle<promise_type>::from_promise(*this)};
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() {}
        void unhandled_exception() { exception = std::current_exception(); }
    };

    ProcTask() = default;
    explicit ProcTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
    ProcTask(ProcTask&& other) noexcept : handle_(std::exchange(other.handle_, nullptr)) {}
    ProcTask& operator=(ProcTask&& other) noexcept {
        if (this != &other) {
            destroy();
            handle_ = std::exchange(other.handle_, nullptr);
        }
        return *this;
    }
    ProcTask(const ProcTask&) = delete;
    ProcTask& operator=(const ProcTask&) = delete;
    ~ProcTask() { destroy(); }

    std::coroutine_handle<promise_type> handle() const { return handle_; }
    bool done() const { return !handle_ || handle_.done(); }
    void rethrow_if_failed() const {
        if (handle_ && handle_.promise().exception)
            std::rethrow_exception(handle_.promise().exception);
    }

private:
    void destroy() {
        if (handle_) {
            handle_.destroy();
            handle_ = nullptr;
        }
    }
    std::coroutine_handle<promise_type> handle_;
};

/// Awaitable subroutine used to factor shared protocol fragments
/// (Verify-Collision, tree collectives) out of algorithm bodies. When the
/// subroutine suspends on a memory operation, control unwinds to the engine;
/// completion resumes the awaiting parent via symmetric transfer.
template <typename T>
class SubTask {
    struct FinalAwaiter {
        bool await_ready() const noexcept { return false; }
        template <typename P>
        std::coroutine_handle<> await_suspend(std::coroutine_handle<P> h) noexcept {
            auto cont = h.promise().continuation;
            return cont ? cont : std::noop_coroutine();
        }
        void await_resume() const noexcept {}
    };

public:
    struct promise_type {
        T value{};
        std::exception_ptr exception;
        std::coroutine_handle<> continuation;

        SubTask get_return_object() {
            return SubTask{std::coroutine_handle<promise_type>::from_promise(*this)};
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        FinalAwaiter final_suspend() noexcept { return {}; }
        void return_value(T v) { value = std::move(v); }
        void unhandled_exception() { exception = std::current_exception(); }
    };

    explicit SubTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
    SubTask(SubTask&& other) noexcept : handle_(std::exchange(other.handle_, nullptr)) {}
    SubTask(const SubTask&) = delete;
    SubTask& operator=(const SubTask&) = delete;
    SubTask& operator=(SubTask&&) = delete;
    ~SubTask() {
        if (handle_) handle_.destroy();
    }

    auto operator co_await() && noexcept {
        struct Awaiter {
            std::coroutine_handle<promise_type> child;
            bool await_ready() const noexcept { return false; }
            std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) noexcept {
                child.promise().continuation = parent;
                return child;
            }
            T await_resume() {
                if (child.promise().exception)
                    std::rethrow_exception(child.promise().exception);
                return std::move(child.promise().value);
            }
        };
        return Awaiter{handle_};
    }

private:
    std::coroutine_handle<promise_type> handle_;
};

}  // namespace anonpram
