//! C ABI over the blockmatch toolkit.
//!
//! Frames and motion fields cross the boundary as opaque handles created
//! and released by this library; every fallible call returns a [`BmStatus`]
//! and writes its result through out-pointers. The header is generated into
//! `include/blockmatch.h` at build time.

use blockmatch::{estimate_frame, Algorithm, Error, Frame, MotionField, SearchConfig};
use std::ffi::CStr;
use std::os::raw::c_char;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmStatus {
    BmOk = 0,
    BmErrNullPointer = 1,
    BmErrInvalidArgument = 2,
    BmErrDimensions = 3,
    BmErrUnknownAlgorithm = 4,
    BmErrOutOfBounds = 5,
}

/// Block distortion measure selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmCostKind {
    BmCostMad = 0,
    BmCostMse = 1,
}

/// Search parameters; obtain defaults from `bm_config_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BmConfig {
    pub block_size: u32,
    pub search_range: i32,
    pub cost_kind: BmCostKind,
}

/// Opaque 8-bit luma frame handle.
pub struct BmFrame(Frame);

/// Opaque per-frame motion field handle.
pub struct BmField(MotionField);

fn status_of(err: &Error) -> BmStatus {
    match err {
        Error::UnknownAlgorithm(_) => BmStatus::BmErrUnknownAlgorithm,
        Error::DimensionMismatch(..) | Error::FrameTiling { .. } | Error::LumaLength { .. } => {
            BmStatus::BmErrDimensions
        }
        Error::OutOfBounds { .. } => BmStatus::BmErrOutOfBounds,
        _ => BmStatus::BmErrInvalidArgument,
    }
}

fn to_config(cfg: &BmConfig) -> SearchConfig {
    SearchConfig {
        block_size: cfg.block_size as usize,
        search_range: cfg.search_range,
        cost_kind: match cfg.cost_kind {
            BmCostKind::BmCostMad => blockmatch::CostKind::Mad,
            BmCostKind::BmCostMse => blockmatch::CostKind::Mse,
        },
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Default configuration: 16x16 blocks, +/-7 window, MAD.
#[no_mangle]
pub extern "C" fn bm_config_default() -> BmConfig {
    BmConfig {
        block_size: 16,
        search_range: 7,
        cost_kind: BmCostKind::BmCostMad,
    }
}

/// Creates a frame from a row-major luma plane of `width * height` bytes.
///
/// # Safety
/// `luma` must point to at least `luma_len` readable bytes and `out` must be
/// a valid pointer. The returned handle is released with `bm_frame_free`.
#[no_mangle]
pub unsafe extern "C" fn bm_frame_create(
    width: u32,
    height: u32,
    luma: *const u8,
    luma_len: usize,
    out: *mut *mut BmFrame,
) -> BmStatus {
    if luma.is_null() || out.is_null() {
        return BmStatus::BmErrNullPointer;
    }
    let data = std::slice::from_raw_parts(luma, luma_len).to_vec();
    match Frame::new(width as usize, height as usize, data) {
        Ok(frame) => {
            *out = Box::into_raw(Box::new(BmFrame(frame)));
            BmStatus::BmOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a frame handle; a NULL handle is ignored.
///
/// # Safety
/// `frame` must be NULL or a pointer returned by `bm_frame_create` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bm_frame_free(frame: *mut BmFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Runs the named search algorithm (for example "dcds", "cds", "fs") over
/// every block of `current` against `reference`.
///
/// # Safety
/// `alg_id` must be a NUL-terminated string; `current`, `reference`, `cfg`
/// and `out` must be valid pointers. The returned handle is released with
/// `bm_field_free`.
#[no_mangle]
pub unsafe extern "C" fn bm_estimate_frame(
    alg_id: *const c_char,
    current: *const BmFrame,
    reference: *const BmFrame,
    cfg: *const BmConfig,
    out: *mut *mut BmField,
) -> BmStatus {
    if alg_id.is_null()
        || current.is_null()
        || reference.is_null()
        || cfg.is_null()
        || out.is_null()
    {
        return BmStatus::BmErrNullPointer;
    }
    let Ok(alg_id) = CStr::from_ptr(alg_id).to_str() else {
        return BmStatus::BmErrInvalidArgument;
    };
    let alg = match Algorithm::parse(alg_id) {
        Ok(alg) => alg,
        Err(e) => return status_of(&e),
    };
    match estimate_frame(alg, &(*current).0, &(*reference).0, &to_config(&*cfg)) {
        Ok(field) => {
            *out = Box::into_raw(Box::new(BmField(field)));
            BmStatus::BmOk
        }
        Err(e) => status_of(&e),
    }
}

/// Block-grid width of a motion field.
///
/// # Safety
/// `field` must be a live handle from `bm_estimate_frame`.
#[no_mangle]
pub unsafe extern "C" fn bm_field_cols(field: *const BmField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).0.cols as u32
}

/// Block-grid height of a motion field.
///
/// # Safety
/// `field` must be a live handle from `bm_estimate_frame`.
#[no_mangle]
pub unsafe extern "C" fn bm_field_rows(field: *const BmField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).0.rows as u32
}

/// Reads one block's vector, raw distortion and search-point count. Any of
/// the out-pointers may be NULL to skip that value.
///
/// # Safety
/// `field` must be a live handle; non-NULL out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bm_field_block(
    field: *const BmField,
    col: u32,
    row: u32,
    dx: *mut i32,
    dy: *mut i32,
    cost: *mut f64,
    nsp: *mut u32,
) -> BmStatus {
    if field.is_null() {
        return BmStatus::BmErrNullPointer;
    }
    let f = &(*field).0;
    if col as usize >= f.cols || row as usize >= f.rows {
        return BmStatus::BmErrInvalidArgument;
    }
    let i = row as usize * f.cols + col as usize;
    if !dx.is_null() {
        *dx = f.vectors[i].dx;
    }
    if !dy.is_null() {
        *dy = f.vectors[i].dy;
    }
    if !cost.is_null() {
        *cost = f.per_block_cost[i];
    }
    if !nsp.is_null() {
        *nsp = f.per_block_nsp[i];
    }
    BmStatus::BmOk
}

/// Releases a motion-field handle; a NULL handle is ignored.
///
/// # Safety
/// `field` must be NULL or a pointer returned by `bm_estimate_frame` that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bm_field_free(field: *mut BmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Fills `out_counts` with the ideal-surface search-point map of the named
/// algorithm: `(range+1)^2` entries when `quarter` is nonzero (rows dy
/// ascending from 0), `(2*range+1)^2` entries otherwise (rows from
/// -range). `out_len` must match exactly.
///
/// # Safety
/// `alg_id` must be a NUL-terminated string and `out_counts` must point to
/// `out_len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn bm_ideal_nsp_map(
    alg_id: *const c_char,
    range: i32,
    quarter: u32,
    out_counts: *mut u32,
    out_len: usize,
) -> BmStatus {
    if alg_id.is_null() || out_counts.is_null() {
        return BmStatus::BmErrNullPointer;
    }
    let Ok(alg_id) = CStr::from_ptr(alg_id).to_str() else {
        return BmStatus::BmErrInvalidArgument;
    };
    let alg = match Algorithm::parse(alg_id) {
        Ok(alg) => alg,
        Err(e) => return status_of(&e),
    };
    if range < 1 {
        return BmStatus::BmErrInvalidArgument;
    }
    let map = blockmatch::idealsim::nsp_map(alg, range, quarter != 0);
    if map.counts.len() != out_len {
        return BmStatus::BmErrDimensions;
    }
    std::slice::from_raw_parts_mut(out_counts, out_len).copy_from_slice(&map.counts);
    BmStatus::BmOk
}
