#include "anonpram/algorithms.hpp"

namespace anonpram::algo {

SubTask<bool> verify_collision(ProcContext& ctx, CellAddr heads, CellAddr tails) {
    co_await ctx.write(heads, 0);
    co_await ctx.write(tails, 0);
    if (ctx.draw(2) == 1)
        co_await ctx.write(tails, 1);
    else
        co_await ctx.write(heads, 1);
    CellValue t = co_await ctx.read(tails);
    CellValue h = co_await ctx.read(heads);
    co_return t == h;
}

}  // namespace anonpram::algo
