//! C ABI over `imcrystal`.
//!
//! Cartan data lives behind an opaque handle. Every fallible call returns an
//! `ImcStatus`; on failure `imc_last_error_message` describes the error for
//! the calling thread. Results are returned as NUL-terminated JSON strings
//! owned by the caller and released with `imc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use imcrystal::crystal::CrystalWindow;
use imcrystal::report::{envelope_json, verify_omega_order, verify_star_order};
use imcrystal::{
    build_cartan, parse_generator, parse_word, resolve_family, CartanData, Diagnostics, Element, Engine, Error,
    OmegaVariant, WordWindow,
};
use serde_json::json;

/// Opaque Cartan data handle.
pub struct ImcCartan {
    inner: CartanData,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    UnknownFamily = 3,
    InvalidRank = 4,
    InvalidCartan = 5,
    IndexOutOfRange = 6,
    UnsupportedPairing = 7,
    WindowTooLarge = 8,
    InvalidWindow = 9,
    NotOrdered = 10,
    StraightenDiverged = 11,
    NoCase = 12,
    ResidualNotOrdered = 13,
    SearchExhausted = 14,
    Parse = 15,
    InvalidArgument = 16,
    Panic = 17,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImcVariant {
    Twisted = 0,
    Classic = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(e: &Error) -> ImcStatus {
    match e {
        Error::UnknownFamily(_) => ImcStatus::UnknownFamily,
        Error::InvalidRank { .. } => ImcStatus::InvalidRank,
        Error::InvalidCartan(_) => ImcStatus::InvalidCartan,
        Error::IndexOutOfRange { .. } => ImcStatus::IndexOutOfRange,
        Error::UnsupportedPairing { .. } => ImcStatus::UnsupportedPairing,
        Error::WindowTooLarge { .. } => ImcStatus::WindowTooLarge,
        Error::InvalidWindow(_) => ImcStatus::InvalidWindow,
        Error::NotOrdered(_) => ImcStatus::NotOrdered,
        Error::StraightenDiverged { .. } => ImcStatus::StraightenDiverged,
        Error::NoCase { .. } => ImcStatus::NoCase,
        Error::ResidualNotOrdered(_) => ImcStatus::ResidualNotOrdered,
        Error::SearchExhausted { .. } => ImcStatus::SearchExhausted,
        Error::Parse { .. } => ImcStatus::Parse,
    }
}

struct Fail(ImcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ImcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ImcStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ImcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ImcStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(ImcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const ImcCartan) -> Result<&'a CartanData, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| Fail(ImcStatus::NullArgument, "cartan handle is null".into()))
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(ImcStatus::NullArgument, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(ImcStatus::Panic, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn element_json(e: &Element) -> serde_json::Value {
    json!({ "terms": e, "display": e.to_string() })
}

/// Builds Cartan data for a family name (`A`..`G`, `E6`, `F4`, ...) and rank.
///
/// # Safety
/// `family` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn imc_cartan_new(family: *const c_char, rank: usize, out: *mut *mut ImcCartan) -> ImcStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(ImcStatus::NullArgument, "output pointer is null".into()));
        }
        let name = text(family, "family")?;
        let inner = build_cartan(resolve_family(name, rank)?, rank)?;
        *out = Box::into_raw(Box::new(ImcCartan { inner }));
        Ok(())
    })
}

/// Releases a handle from `imc_cartan_new`. Null is ignored.
///
/// # Safety
/// `h` must come from `imc_cartan_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn imc_cartan_free(h: *mut ImcCartan) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn imc_cartan_rank(h: *const ImcCartan) -> usize {
    h.as_ref().map_or(0, |h| h.inner.rank())
}

/// `(α_i|α_j)` for 1-based nodes.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn imc_cartan_pairing(h: *const ImcCartan, i: usize, j: usize, out: *mut i64) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        if out.is_null() {
            return Err(Fail(ImcStatus::NullArgument, "output pointer is null".into()));
        }
        *out = c.pairing_value(i, j)?;
        Ok(())
    })
}

/// Cartan matrix, symmetrizers, pairing matrix and diagram as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn imc_describe(h: *const ImcCartan, out: *mut *mut c_char) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let v = json!({
            "cartan_matrix": c.matrix(),
            "symmetrizers": c.symmetrizers(),
            "pairing_matrix": c.pairing_matrix(),
            "diagram": c.diagram(),
        });
        emit(out, envelope_json(&Engine::new(c), "describe", &v))
    })
}

/// g-table entry for nodes `i`, `j` and index `r`, as `[[2e, c], ...]`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn imc_g_qinv(
    h: *const ImcCartan,
    i: usize,
    j: usize,
    r: u32,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let g = c.g_qinv(i, j, r)?;
        emit(out, json!({ "coeff": g, "display": g.to_string() }).to_string())
    })
}

/// Twisted product of two generators such as `"x[1,0]"`, straightened.
///
/// # Safety
/// `h` must be a live handle; strings must be valid C strings; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn imc_star(
    h: *const ImcCartan,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let l = parse_generator(text(left, "left")?)?;
        let r = parse_generator(text(right, "right")?)?;
        let engine = Engine::new(c);
        let (rep, diag) = engine.star_pair_report(l, r)?;
        emit(out, envelope_json(&engine, "star", &json!({ "pair": rep, "diagnostics": diag })))
    })
}

/// `x̃` of a generator applied to an ordered word such as `"x[1,1] x[1,0]"`.
///
/// # Safety
/// As for `imc_star`.
#[no_mangle]
pub unsafe extern "C" fn imc_xtilde(
    h: *const ImcCartan,
    generator: *const c_char,
    word: *const c_char,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let g = parse_generator(text(generator, "generator")?)?;
        let w = parse_word(text(word, "word")?)?;
        if !w.is_ordered() {
            return Err(Error::NotOrdered(w).into());
        }
        let engine = Engine::new(c);
        let mut diag = Diagnostics::default();
        let v = engine.xtilde(g, &Element::from_word(w), &mut diag)?;
        emit(out, envelope_json(&engine, "xtilde", &json!({ "result": element_json(&v), "diagnostics": diag })))
    })
}

/// Ω of node `i` and argument `m` applied to an ordered word.
///
/// # Safety
/// As for `imc_star`.
#[no_mangle]
pub unsafe extern "C" fn imc_omega(
    h: *const ImcCartan,
    variant: ImcVariant,
    i: usize,
    m: i64,
    word: *const c_char,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let w = parse_word(text(word, "word")?)?;
        let v = match variant {
            ImcVariant::Twisted => OmegaVariant::Twisted,
            ImcVariant::Classic => OmegaVariant::Classic,
        };
        let engine = Engine::new(c);
        let mut diag = Diagnostics::default();
        let r = engine.omega(v, i, m, &Element::from_word(w), &mut diag)?;
        emit(out, envelope_json(&engine, "omega", &json!({ "result": element_json(&r), "diagnostics": diag })))
    })
}

/// Bilinear form of two ordered words.
///
/// # Safety
/// As for `imc_star`.
#[no_mangle]
pub unsafe extern "C" fn imc_pair(
    h: *const ImcCartan,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let u = Element::from_word(parse_word(text(left, "left")?)?);
        let v = Element::from_word(parse_word(text(right, "right")?)?);
        let engine = Engine::new(c);
        let value = engine.pair(&u, &v, &mut Diagnostics::default())?;
        emit(out, json!({ "coeff": value, "display": value.to_string() }).to_string())
    })
}

/// Runs one suite (`star-order`, `omega-order`, `gram`, `lattice`, `basis`)
/// over a window given as JSON:
/// `{"max_len":2,"kmin":-1,"kmax":1,"mmin":-1,"mmax":1,"nodes":null}`.
///
/// # Safety
/// As for `imc_star`.
#[no_mangle]
pub unsafe extern "C" fn imc_verify(
    h: *const ImcCartan,
    suite: *const c_char,
    window_json: *const c_char,
    out: *mut *mut c_char,
) -> ImcStatus {
    guard(|| {
        let c = handle(h)?;
        let suite = text(suite, "suite")?;
        let raw: serde_json::Value = serde_json::from_str(text(window_json, "window")?)
            .map_err(|e| Fail(ImcStatus::InvalidArgument, format!("window: {e}")))?;
        let int = |k: &str, default: i64| raw.get(k).and_then(serde_json::Value::as_i64).unwrap_or(default);
        let words = WordWindow {
            max_len: int("max_len", 2).max(0) as usize,
            kmin: int("kmin", -1),
            kmax: int("kmax", 1),
            nodes: raw
                .get("nodes")
                .and_then(|n| n.as_array())
                .map(|a| a.iter().filter_map(|x| x.as_u64()).map(|x| x as usize).collect()),
        };
        let win = CrystalWindow { words, mmin: int("mmin", -1), mmax: int("mmax", 1) };
        let engine = Engine::new(c);
        let text = match suite {
            "star-order" => envelope_json(&engine, suite, &verify_star_order(&engine, &win.words)?),
            "omega-order" => envelope_json(
                &engine,
                suite,
                &verify_omega_order(&engine, OmegaVariant::Twisted, &win.words, win.mmin, win.mmax)?,
            ),
            "gram" => envelope_json(&engine, suite, &engine.check_gram_window(&win.words)?),
            "lattice" => envelope_json(&engine, suite, &engine.check_lattice(&win)?),
            "basis" => envelope_json(&engine, suite, &engine.check_basis(&win)?),
            other => return Err(Fail(ImcStatus::InvalidArgument, format!("unknown suite `{other}`"))),
        };
        emit(out, text)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn imc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn imc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn imc_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr() as *const c_char
}
