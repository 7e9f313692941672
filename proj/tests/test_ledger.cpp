#include <doctest.h>

#include <daosim/ledger.hpp>

#include "support.hpp"

using namespace daosim;

namespace {

Ledger two_accounts(std::uint64_t a, std::uint64_t b)
{
    const std::vector<std::pair<Address, Amount>> g{{"A", Amount{a}}, {"B", Amount{b}}};
    return Ledger::genesis(g);
}

errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::io_error;
}

} // namespace

TEST_CASE("genesis seals height 0 and records total supply")
{
    const Ledger l = two_accounts(100, 50);
    CHECK(l.head_height() == 0);
    CHECK(l.total_supply() == Amount{150});
    CHECK_FALSE(l.has_pending());
    CHECK(l.head().balance_of("C") == Amount{0});
}

TEST_CASE("open_block copies the head balances at the next height")
{
    Ledger l = two_accounts(100, 0);
    l.open_block();
    CHECK(l.current_height() == 1);
    CHECK(l.pending_balance("A") == Amount{100});
    CHECK(l.open_flash_loans().empty());
    l.seal_block();
    l.advance(4);
    CHECK(l.head_height() == 5);
    l.open_block();
    CHECK(l.current_height() == 6);
    CHECK(l.pending_balance("A") == Amount{100});
    CHECK(code_of([&] { l.open_block(); }) == errc::block_already_open);
}

TEST_CASE("transfer")
{
    Ledger l = two_accounts(100, 0);
    CHECK(code_of([&] { l.transfer("A", "B", Amount{1}); }) == errc::no_open_block);
    l.open_block();

    SUBCASE("moves the full balance")
    {
        l.transfer("A", "B", Amount{100});
        CHECK(l.pending_balance("A") == Amount{0});
        CHECK(l.pending_balance("B") == Amount{100});
        CHECK(l.head().balance_of("A") == Amount{100});
    }
    SUBCASE("zero is a no-op")
    {
        l.transfer("A", "B", Amount{0});
        CHECK(l.pending_balance("A") == Amount{100});
        CHECK(l.pending_actions().empty());
    }
    SUBCASE("overdraft is rejected and leaves state untouched")
    {
        Ledger m = two_accounts(50, 0);
        m.open_block();
        CHECK(code_of([&] { m.transfer("A", "B", Amount{60}); }) == errc::insufficient_balance);
        CHECK(m.pending_balance("A") == Amount{50});
    }
}

TEST_CASE("flash loans")
{
    Ledger l = two_accounts(0, 0);
    CHECK(code_of([&] { l.flash_borrow("A", Amount{1}); }) == errc::no_open_block);
    l.open_block();

    SUBCASE("a billion-token borrow credits the borrower")
    {
        l.flash_borrow("A", Amount{1'000'000'000});
        CHECK(l.pending_balance("A") == Amount{1'000'000'000});
        CHECK(l.open_loan("A") == Amount{1'000'000'000});
    }
    SUBCASE("borrows accumulate and zero is a no-op")
    {
        l.flash_borrow("A", Amount{0});
        CHECK(l.open_flash_loans().empty());
        l.flash_borrow("A", Amount{500});
        l.flash_borrow("A", Amount{500});
        CHECK(l.open_loan("A") == Amount{1000});
    }
    SUBCASE("repay")
    {
        l.flash_borrow("A", Amount{1000});
        l.flash_repay("A", Amount{500});
        CHECK(l.open_loan("A") == Amount{500});
        l.flash_repay("A", Amount{500});
        CHECK(l.open_loan("A") == Amount{0});
        CHECK(l.open_flash_loans().empty());
        CHECK(code_of([&] { l.flash_repay("B", Amount{1}); }) == errc::no_outstanding_loan);
    }
    SUBCASE("repay needs the funds")
    {
        l.flash_borrow("A", Amount{1000});
        l.transfer("A", "B", Amount{600});
        CHECK(code_of([&] { l.flash_repay("A", Amount{1000}); }) == errc::insufficient_balance);
    }
}

TEST_CASE("seal_block")
{
    Ledger l = two_accounts(100, 20);

    SUBCASE("without loans the pending balances become the next snapshot")
    {
        l.open_block();
        l.transfer("A", "B", Amount{30});
        l.seal_block();
        CHECK(l.head_height() == 1);
        CHECK(l.head().balance_of("A") == Amount{70});
        CHECK(l.head().balance_of("B") == Amount{50});
        CHECK(l.head().total_supply == Amount{120});
    }
    SUBCASE("an unrepaid loan reverts everything the borrower did")
    {
        l.open_block();
        l.flash_borrow("X", Amount{1'000'000'000});
        l.transfer("X", "B", Amount{1'000'000'000});
        l.transfer("A", "B", Amount{5});
        l.seal_block();
        CHECK(l.head().balance_of("X") == Amount{0});
        CHECK(l.head().balance_of("B") == Amount{25});
        CHECK(l.head().balance_of("A") == Amount{95});
        CHECK(testing::supply_of(l.head()) == 120);
        const bool reverted = std::any_of(l.events().begin(), l.events().end(), [](const LedgerEvent& e) {
            return e.kind == EventKind::revert && e.from == Address{"X"} && e.amount == Amount{1'000'000'000};
        });
        CHECK(reverted);
    }
    SUBCASE("a repaid loan keeps the borrower's net changes")
    {
        l.open_block();
        l.flash_borrow("A", Amount{1000});
        l.transfer("A", "B", Amount{10});
        l.flash_repay("A", Amount{1000});
        l.seal_block();
        CHECK(l.head().balance_of("A") == Amount{90});
        CHECK(l.head().balance_of("B") == Amount{30});
    }
    SUBCASE("actions funded by a reverted borrower fail with it")
    {
        l.open_block();
        l.flash_borrow("X", Amount{500});
        l.transfer("X", "B", Amount{500});
        l.transfer("B", "A", Amount{400}); // only possible with X's funds
        l.seal_block();
        CHECK(l.head().balance_of("A") == Amount{100});
        CHECK(l.head().balance_of("B") == Amount{20});
    }
    SUBCASE("a borrower whose repayment depended on a reverted account is reverted too")
    {
        l.open_block();
        l.flash_borrow("X", Amount{50});
        l.transfer("X", "B", Amount{50});
        l.flash_borrow("B", Amount{60});
        l.transfer("B", "A", Amount{40});
        l.flash_repay("B", Amount{60}); // covered only thanks to X
        l.seal_block();
        CHECK(l.head().balance_of("A") == Amount{100});
        CHECK(l.head().balance_of("B") == Amount{20});
        CHECK(testing::supply_of(l.head()) == 120);
    }
}

TEST_CASE("history_vector reads oldest first")
{
    Ledger l = two_accounts(100, 0);
    l.advance(4);
    CHECK(l.history_vector("A", 5, 4) == std::vector<Amount>(5, Amount{100}));

    l.open_block();
    l.transfer("A", "N", Amount{50});
    l.seal_block();
    CHECK(l.history_vector("N", 5, 5) ==
          std::vector<Amount>{Amount{0}, Amount{0}, Amount{0}, Amount{0}, Amount{50}});
    CHECK(l.history_vector("nobody", 3, 5) == std::vector<Amount>(3, Amount{0}));

    CHECK(code_of([&] { (void)l.history_vector("A", 7, 5); }) == errc::window_too_large);
    CHECK(code_of([&] { (void)l.history_vector("A", 1, 6); }) == errc::unsealed_height);

    std::uint64_t reads = 0;
    (void)l.history_vector("A", 4, 5, &reads);
    CHECK(reads == 4);
}

TEST_CASE("history_vector is immutable under later blocks")
{
    std::mt19937_64 rng{7};
    Ledger l = Ledger::genesis(testing::random_genesis(rng, 6, 1000));
    l.advance(3);
    const auto before = l.history_vector(testing::account(2), 4, 3);
    for (int b = 0; b < 20; ++b) {
        l.open_block();
        testing::random_block(rng, l, 6, 15, 400);
        l.seal_block();
    }
    CHECK(l.history_vector(testing::account(2), 4, 3) == before);
}

TEST_CASE("locks hold tokens out of the transferable balance until unlock")
{
    Ledger l = two_accounts(100, 0);
    l.open_block();
    CHECK(code_of([&] { l.lock("A", Amount{10}, 1, 10); }) == errc::invalid_lock);
    CHECK(code_of([&] { l.lock("A", Amount{10}, 20, 10); }) == errc::invalid_lock);
    l.lock("A", Amount{80}, 5, 10);
    CHECK(l.transferable_balance("A") == Amount{20});
    CHECK(code_of([&] { l.transfer("A", "B", Amount{21}); }) == errc::insufficient_balance);
    l.seal_block();
    REQUIRE(l.locks().size() == 1);
    CHECK(l.locks()[0].created == 1);

    l.advance(2);
    l.open_block(); // height 4, still locked
    CHECK(code_of([&] { l.transfer("A", "B", Amount{21}); }) == errc::insufficient_balance);
    l.seal_block();
    l.open_block(); // height 5 is the unlock height
    l.transfer("A", "B", Amount{100});
    l.seal_block();
    CHECK(l.head().balance_of("B") == Amount{100});
}

TEST_CASE("property: conservation and atomicity over random blocks")
{
    std::mt19937_64 rng{20240417};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t accounts = 2 + rng() % 5;
        Ledger l = Ledger::genesis(testing::random_genesis(rng, accounts, 500));
        for (int block = 0; block < 4; ++block) {
            const Ledger before = l;
            l.open_block();
            const auto ops = testing::random_block(rng, l, accounts, 1 + rng() % 12, 300);
            const auto removed = testing::delinquents(l);
            l.seal_block();

            CHECK(testing::supply_of(l.head()) == l.total_supply().value());
            const Ledger reference = testing::replay_without(before, ops, removed);
            CHECK(reference.head() == l.head());
        }
    }
}

TEST_CASE("determinism: identical sequences give identical ledgers")
{
    const auto build = [] {
        std::mt19937_64 rng{99};
        Ledger l = Ledger::genesis(testing::random_genesis(rng, 5, 1000));
        for (int b = 0; b < 10; ++b) {
            l.open_block();
            testing::random_block(rng, l, 5, 10, 500);
            l.seal_block();
        }
        return l;
    };
    CHECK(build() == build());
}
