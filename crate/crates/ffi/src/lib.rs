//! C ABI over `contagion-core`.
//!
//! Objects are opaque handles created by `ctg_*_new`-style functions and
//! released with the matching `ctg_*_free`. Fallible calls return a
//! [`CtgStatus`] and write their result through an out-pointer; on failure
//! `ctg_last_error()` describes the problem until the next failing call on
//! the same thread. Randomized constructors take a 64-bit seed and are
//! reproducible across platforms.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use contagion_core::balance::{apply_policy, assign_powerlaw, assign_uniform, BalanceSheetSet, SheetScheme};
use contagion_core::cascade::{run_cascade, CascadeOutcome};
use contagion_core::experiment::{stream_rng, StreamPurpose};
use contagion_core::netgen::{
    degree_assortativity, gen_erdos_renyi, gen_scale_free, hamiltonian, rewire_assortativity, DirectedNetwork,
};
use contagion_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its valid range.
    InvalidArgument = 2,
    /// The parameters are valid but cannot be realized (e.g. an unreachable
    /// mean degree).
    Infeasible = 3,
    /// A network and sheet set of different shapes were combined.
    Mismatch = 4,
    /// An internal error; the library state is unaffected.
    Internal = 5,
}

/// Opaque directed interbank network.
pub struct CtgNetwork(DirectedNetwork);

/// Opaque set of bank balance sheets tied to one network's shape.
pub struct CtgSheets(BalanceSheetSet);

/// Opaque result of one cascade.
pub struct CtgOutcome(CascadeOutcome);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(err: &Error) -> CtgStatus {
    match err {
        Error::UnreachableMeanDegree { .. } | Error::TooFewEdges(_) | Error::ZeroVariance => CtgStatus::Infeasible,
        Error::SizeMismatch { .. } => CtgStatus::Mismatch,
        Error::Io(_) => CtgStatus::Internal,
        _ => CtgStatus::InvalidArgument,
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), (CtgStatus, String)>) -> CtgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CtgStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CtgStatus::Internal
        }
    }
}

fn core_err(err: Error) -> (CtgStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (CtgStatus, String) {
    (CtgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, (CtgStatus, String)> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), (CtgStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (CtgStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

/// Message of the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ctg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ctg_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

// ---------------------------------------------------------------- networks

/// Directed Erdős–Rényi network with `n` banks and mean in-degree `z`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_erdos_renyi(n: usize, z: f64, seed: u64, out: *mut *mut CtgNetwork) -> CtgStatus {
    guard(|| {
        let mut rng = stream_rng(seed, 0, 0, StreamPurpose::Network);
        let net = gen_erdos_renyi(n, z, &mut rng).map_err(core_err)?;
        emit(out, CtgNetwork(net))
    })
}

/// Scale-free network with degree tail exponent `gamma > 2` and mean
/// in-degree `z`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_scale_free(
    n: usize,
    gamma: f64,
    z: f64,
    seed: u64,
    out: *mut *mut CtgNetwork,
) -> CtgStatus {
    guard(|| {
        let mut rng = stream_rng(seed, 0, 0, StreamPurpose::Network);
        let net = gen_scale_free(n, gamma, z, &mut rng).map_err(core_err)?;
        emit(out, CtgNetwork(net))
    })
}

/// Network from `m` edges; edge `i` is a claim of `creditors[i]` on
/// `debtors[i]`. Self-loops and duplicates are rejected.
///
/// # Safety
/// `debtors` and `creditors` must each point to `m` readable values (they
/// may be null when `m == 0`); `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_from_edges(
    n: usize,
    debtors: *const usize,
    creditors: *const usize,
    m: usize,
    out: *mut *mut CtgNetwork,
) -> CtgStatus {
    guard(|| {
        let edges: Vec<(usize, usize)> = if m == 0 {
            Vec::new()
        } else {
            if debtors.is_null() || creditors.is_null() {
                return Err(null("edge array"));
            }
            let d = std::slice::from_raw_parts(debtors, m);
            let c = std::slice::from_raw_parts(creditors, m);
            d.iter().copied().zip(c.iter().copied()).collect()
        };
        let net = DirectedNetwork::from_edges(n, &edges).map_err(core_err)?;
        emit(out, CtgNetwork(net))
    })
}

/// Degree-preserving Metropolis rewiring with coupling `coupling`
/// (negative favors disassortative mixing) and `sweeps` proposals per edge.
/// The input network is left unchanged.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_rewire(
    net: *const CtgNetwork,
    coupling: f64,
    sweeps: usize,
    seed: u64,
    out: *mut *mut CtgNetwork,
) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        if !coupling.is_finite() {
            return Err((CtgStatus::InvalidArgument, format!("coupling must be finite, got {coupling}")));
        }
        let mut rng = stream_rng(seed, 0, 0, StreamPurpose::Rewire);
        let (rewired, _) = rewire_assortativity(&net.0, coupling, sweeps, &mut rng).map_err(core_err)?;
        emit(out, CtgNetwork(rewired))
    })
}

/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_node_count(net: *const CtgNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.node_count())
}

/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_edge_count(net: *const CtgNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.edge_count())
}

/// Endpoints of edge `id` in canonical (debtor, creditor) order.
///
/// # Safety
/// `net` must be a live handle; `debtor` and `creditor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_edge(
    net: *const CtgNetwork,
    id: usize,
    debtor: *mut usize,
    creditor: *mut usize,
) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        if id >= net.0.edge_count() {
            return Err((
                CtgStatus::InvalidArgument,
                format!("edge {id} out of range for {} edges", net.0.edge_count()),
            ));
        }
        let (d, c) = net.0.edge(id);
        write(debtor, d)?;
        write(creditor, c)
    })
}

/// In- and out-degree of `bank`.
///
/// # Safety
/// `net` must be a live handle; `in_degree` and `out_degree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_degree(
    net: *const CtgNetwork,
    bank: usize,
    in_degree: *mut usize,
    out_degree: *mut usize,
) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        let n = net.0.node_count();
        if bank >= n {
            return Err(core_err(Error::BankOutOfRange { index: bank, n }));
        }
        write(in_degree, net.0.in_degree(bank))?;
        write(out_degree, net.0.out_degree(bank))
    })
}

/// Pearson degree assortativity over the undirected projection.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_assortativity(net: *const CtgNetwork, out: *mut f64) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        let r = degree_assortativity(&net.0).map_err(core_err)?;
        write(out, r)
    })
}

/// Rewiring energy of the network at coupling `coupling`.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_energy(net: *const CtgNetwork, coupling: f64, out: *mut f64) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        write(out, hamiltonian(&net.0, coupling))
    })
}

/// # Safety
/// `net` must be a handle from this library that has not been freed, or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_network_free(net: *mut CtgNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

// ------------------------------------------------------------------ sheets

/// Identical balance sheets for every bank of `net`.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_sheets_uniform(net: *const CtgNetwork, out: *mut *mut CtgSheets) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        let sheets = assign_uniform(&net.0, &SheetScheme::uniform()).map_err(core_err)?;
        emit(out, CtgSheets(sheets))
    })
}

/// Pareto-distributed bank sizes with tail exponent `alpha > 2`.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_sheets_power_law(
    net: *const CtgNetwork,
    alpha: f64,
    seed: u64,
    out: *mut *mut CtgSheets,
) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        let mut rng = stream_rng(seed, 0, 0, StreamPurpose::Sheets);
        let sheets = assign_powerlaw(&net.0, &SheetScheme::power_law(alpha), &mut rng).map_err(core_err)?;
        emit(out, CtgSheets(sheets))
    })
}

/// Copy of `sheets` with the capital buffer of each listed bank raised to
/// `buffer` times its total assets.
///
/// # Safety
/// `sheets` must be a live handle; `targets` must point to `count` readable
/// values (null allowed when `count == 0`); `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_sheets_apply_policy(
    sheets: *const CtgSheets,
    targets: *const usize,
    count: usize,
    buffer: f64,
    out: *mut *mut CtgSheets,
) -> CtgStatus {
    guard(|| {
        let sheets = borrow(sheets, "sheets")?;
        let targets: &[usize] = if count == 0 {
            &[]
        } else if targets.is_null() {
            return Err(null("targets"));
        } else {
            std::slice::from_raw_parts(targets, count)
        };
        let updated = apply_policy(&sheets.0, targets, buffer).map_err(core_err)?;
        emit(out, CtgSheets(updated))
    })
}

/// Balance-sheet entries of one bank.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CtgBankSheet {
    pub total_assets: f64,
    pub interbank_assets: f64,
    pub illiquid_assets: f64,
    pub capital: f64,
}

/// # Safety
/// `sheets` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_sheets_bank(sheets: *const CtgSheets, bank: usize, out: *mut CtgBankSheet) -> CtgStatus {
    guard(|| {
        let sheets = borrow(sheets, "sheets")?;
        let n = sheets.0.bank_count();
        if bank >= n {
            return Err(core_err(Error::BankOutOfRange { index: bank, n }));
        }
        write(
            out,
            CtgBankSheet {
                total_assets: sheets.0.total_assets()[bank],
                interbank_assets: sheets.0.interbank_assets()[bank],
                illiquid_assets: sheets.0.illiquid_assets()[bank],
                capital: sheets.0.capital()[bank],
            },
        )
    })
}

/// # Safety
/// `sheets` must be a handle from this library that has not been freed, or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_sheets_free(sheets: *mut CtgSheets) {
    if !sheets.is_null() {
        drop(Box::from_raw(sheets));
    }
}

// ---------------------------------------------------------------- cascades

/// Fails `seed_bank` and propagates losses until no further bank fails.
///
/// # Safety
/// `net` and `sheets` must be live handles; `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctg_cascade_run(
    net: *const CtgNetwork,
    sheets: *const CtgSheets,
    seed_bank: usize,
    out: *mut *mut CtgOutcome,
) -> CtgStatus {
    guard(|| {
        let net = borrow(net, "network")?;
        let sheets = borrow(sheets, "sheets")?;
        let outcome = run_cascade(&net.0, &sheets.0, seed_bank).map_err(core_err)?;
        emit(out, CtgOutcome(outcome))
    })
}

/// # Safety
/// `outcome` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_defaulted_count(outcome: *const CtgOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.0.defaulted_count)
}

/// # Safety
/// `outcome` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_fraction(outcome: *const CtgOutcome) -> f64 {
    outcome.as_ref().map_or(0.0, |o| o.0.fraction_defaulted)
}

/// Number of propagation rounds after the seed failure.
///
/// # Safety
/// `outcome` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_rounds(outcome: *const CtgOutcome) -> u32 {
    outcome.as_ref().map_or(0, |o| o.0.rounds)
}

/// Round in which `bank` failed (0 for the seed), or -1 if it survived.
///
/// # Safety
/// `outcome` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_failure_round(outcome: *const CtgOutcome, bank: usize, out: *mut i64) -> CtgStatus {
    guard(|| {
        let o = borrow(outcome, "outcome")?;
        let n = o.0.defaulted.len();
        if bank >= n {
            return Err(core_err(Error::BankOutOfRange { index: bank, n }));
        }
        write(out, o.0.round[bank].map_or(-1, i64::from))
    })
}

/// Copies up to `capacity` failed banks, in failure order, into `banks` and
/// stores the total number of failures in `written`.
///
/// # Safety
/// `outcome` must be a live handle; `banks` must have room for `capacity`
/// values (null allowed when `capacity == 0`); `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_failure_sequence(
    outcome: *const CtgOutcome,
    banks: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> CtgStatus {
    guard(|| {
        let o = borrow(outcome, "outcome")?;
        let seq = o.0.failure_sequence();
        if capacity > 0 {
            if banks.is_null() {
                return Err(null("banks"));
            }
            let dst = std::slice::from_raw_parts_mut(banks, capacity);
            for (slot, bank) in dst.iter_mut().zip(&seq) {
                *slot = *bank;
            }
        }
        write(written, seq.len())
    })
}

/// # Safety
/// `outcome` must be a handle from this library that has not been freed, or null.
#[no_mangle]
pub unsafe extern "C" fn ctg_outcome_free(outcome: *mut CtgOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}
