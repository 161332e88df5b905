//! MNIST ingestion (IDX binary format), 28×28 → 4×4 block-mean compression,
//! and conversion of pixels into alternating-sign input signals u.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use byteorder::{BigEndian, ReadBytesExt};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seeds;

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// One 28×28 grayscale digit, pixels scaled to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RawImage {
    pub pixels: Vec<f64>,
    pub label: u8,
}

/// Sixteen-step input signal fed to a reservoir, |u_i| ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSignal {
    pub u: [f64; 16],
    pub label: u8,
}

fn format_err(path: &Path, offset: u64, detail: impl Into<String>) -> Error {
    Error::Format {
        file: path.display().to_string(),
        offset,
        detail: detail.into(),
    }
}

/// Parse an IDX image/label file pair into labeled images.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Vec<RawImage>> {
    let mut img = BufReader::new(
        File::open(images_path).map_err(|e| Error::io(images_path.display().to_string(), e))?,
    );
    let magic = img
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(images_path, 0, "truncated magic"))?;
    if magic != IMAGES_MAGIC {
        return Err(format_err(
            images_path,
            0,
            format!("bad magic {magic:#010x}, expected {IMAGES_MAGIC:#010x}"),
        ));
    }
    let count = img
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(images_path, 4, "truncated count"))? as usize;
    let rows = img
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(images_path, 8, "truncated rows"))? as usize;
    let cols = img
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(images_path, 12, "truncated cols"))? as usize;
    if rows != 28 || cols != 28 {
        return Err(format_err(
            images_path,
            8,
            format!("expected 28×28 images, got {rows}×{cols}"),
        ));
    }

    let mut lbl = BufReader::new(
        File::open(labels_path).map_err(|e| Error::io(labels_path.display().to_string(), e))?,
    );
    let lmagic = lbl
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(labels_path, 0, "truncated magic"))?;
    if lmagic != LABELS_MAGIC {
        return Err(format_err(
            labels_path,
            0,
            format!("bad magic {lmagic:#010x}, expected {LABELS_MAGIC:#010x}"),
        ));
    }
    let lcount = lbl
        .read_u32::<BigEndian>()
        .map_err(|_| format_err(labels_path, 4, "truncated count"))? as usize;
    if lcount != count {
        return Err(format_err(
            labels_path,
            4,
            format!("label count {lcount} does not match image count {count}"),
        ));
    }

    let mut out = Vec::with_capacity(count);
    let mut buf = vec![0u8; 784];
    let mut label = [0u8; 1];
    for k in 0..count {
        img.read_exact(&mut buf)
            .map_err(|_| format_err(images_path, 16 + 784 * k as u64, "truncated image data"))?;
        lbl.read_exact(&mut label)
            .map_err(|_| format_err(labels_path, 8 + k as u64, "truncated label data"))?;
        if label[0] > 9 {
            return Err(format_err(
                labels_path,
                8 + k as u64,
                format!("label {} out of range 0–9", label[0]),
            ));
        }
        out.push(RawImage {
            pixels: buf.iter().map(|&b| b as f64 / 255.0).collect(),
            label: label[0],
        });
    }
    Ok(out)
}

/// Canonical file names inside an MNIST directory.
pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

/// Load the training split from a directory containing the canonical files.
pub fn load_mnist_train(dir: &Path) -> Result<Vec<RawImage>> {
    load_idx(&dir.join(TRAIN_IMAGES), &dir.join(TRAIN_LABELS))
}

/// Default dataset location: `data/mnist` at the repository root, or the
/// `MNIST_DIR` environment variable when set.
pub fn default_mnist_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("MNIST_DIR") {
        return PathBuf::from(dir);
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist")
}

/// Mean over non-overlapping 7×7 blocks, row-major block order.
pub fn compress(img: &RawImage) -> [f64; 16] {
    let mut out = [0.0; 16];
    for br in 0..4 {
        for bc in 0..4 {
            let mut sum = 0.0;
            for i in 0..7 {
                for j in 0..7 {
                    sum += img.pixels[(br * 7 + i) * 28 + (bc * 7 + j)];
                }
            }
            out[br * 4 + bc] = sum / 49.0;
        }
    }
    out
}

/// u′_i = (−1)^i u_i (zero-based index); an involution.
pub fn apply_alternating_signs(u: &[f64; 16]) -> [f64; 16] {
    let mut out = *u;
    for (i, v) in out.iter_mut().enumerate() {
        if i % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// Full image → signal pipeline: block mean, then alternating signs.
pub fn signal_from_image(img: &RawImage) -> InputSignal {
    InputSignal {
        u: apply_alternating_signs(&compress(img)),
        label: img.label,
    }
}

/// Disjoint train/test index sets drawn by a seeded shuffle of `total`
/// images (both subsets come from the MNIST training set).
pub fn split_indices(
    total: usize,
    n_train: usize,
    n_test: usize,
    master_seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_train + n_test > total {
        return Err(Error::invalid(format!(
            "split {n_train}+{n_test} exceeds dataset size {total}"
        )));
    }
    if n_train == 0 || n_test == 0 {
        return Err(Error::invalid("train and test sizes must be ≥ 1"));
    }
    let mut idx: Vec<usize> = (0..total).collect();
    let mut rng = seeds::rng(master_seed, "split", &[]);
    idx.shuffle(&mut rng);
    let train = idx[..n_train].to_vec();
    let test = idx[n_train..n_train + n_test].to_vec();
    debug_assert!(train.iter().all(|i| !test.contains(i)));
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use sha2::{Digest, Sha256};
    use std::io::Write;

    fn write_idx_pair(
        dir: &Path,
        images: &[[u8; 784]],
        labels: &[u8],
    ) -> (PathBuf, PathBuf) {
        let img_path = dir.join("imgs");
        let lbl_path = dir.join("lbls");
        let mut f = File::create(&img_path).unwrap();
        f.write_all(&IMAGES_MAGIC.to_be_bytes()).unwrap();
        f.write_all(&(images.len() as u32).to_be_bytes()).unwrap();
        f.write_all(&28u32.to_be_bytes()).unwrap();
        f.write_all(&28u32.to_be_bytes()).unwrap();
        for im in images {
            f.write_all(im).unwrap();
        }
        let mut f = File::create(&lbl_path).unwrap();
        f.write_all(&LABELS_MAGIC.to_be_bytes()).unwrap();
        f.write_all(&(labels.len() as u32).to_be_bytes()).unwrap();
        f.write_all(labels).unwrap();
        (img_path, lbl_path)
    }

    #[test]
    fn synthetic_idx_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let mut img = [0u8; 784];
        img[0] = 255;
        img[783] = 51;
        let (ip, lp) = write_idx_pair(dir.path(), &[img, [0u8; 784]], &[7, 3]);
        let data = load_idx(&ip, &lp).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0].label, 7);
        assert_abs_diff_eq!(data[0].pixels[0], 1.0);
        assert_abs_diff_eq!(data[0].pixels[783], 0.2);
        assert_eq!(data[1].label, 3);
    }

    #[test]
    fn idx_error_paths() {
        let dir = tempfile::tempdir().unwrap();

        // Empty file.
        let empty = dir.path().join("empty");
        File::create(&empty).unwrap();
        assert!(matches!(
            load_idx(&empty, &empty),
            Err(Error::Format { offset: 0, .. })
        ));

        // Bad magic.
        let bad = dir.path().join("bad");
        File::create(&bad).unwrap().write_all(&[9, 9, 9, 9, 0, 0, 0, 0]).unwrap();
        assert!(load_idx(&bad, &bad).is_err());

        // Count mismatch: 2 images, 1 label.
        let (ip, lp) = write_idx_pair(dir.path(), &[[0u8; 784], [0u8; 784]], &[1]);
        let err = load_idx(&ip, &lp).unwrap_err();
        assert!(err.to_string().contains("does not match"));

        // Truncated pixel data.
        let trunc = dir.path().join("trunc");
        let mut f = File::create(&trunc).unwrap();
        f.write_all(&IMAGES_MAGIC.to_be_bytes()).unwrap();
        f.write_all(&1u32.to_be_bytes()).unwrap();
        f.write_all(&28u32.to_be_bytes()).unwrap();
        f.write_all(&28u32.to_be_bytes()).unwrap();
        f.write_all(&[0u8; 100]).unwrap();
        let (_, lp) = write_idx_pair(dir.path(), &[[0u8; 784]], &[0]);
        assert!(load_idx(&trunc, &lp).is_err());
    }

    #[test]
    fn canonical_training_set_pins() {
        // Values pinned from the canonical MNIST files with an independent
        // parser (byte counts, first label, raw-byte digest of image 0).
        let dir = default_mnist_dir();
        assert!(
            dir.join(TRAIN_IMAGES).exists(),
            "MNIST files missing; run scripts/fetch_mnist.sh or set MNIST_DIR"
        );
        let data = load_mnist_train(&dir).unwrap();
        assert_eq!(data.len(), 60000);
        assert_eq!(data[0].label, 5);
        let first10: Vec<u8> = data[..10].iter().map(|im| im.label).collect();
        assert_eq!(first10, vec![5, 0, 4, 1, 9, 2, 1, 3, 1, 4]);

        let raw: Vec<u8> = data[0]
            .pixels
            .iter()
            .map(|&p| (p * 255.0).round() as u8)
            .collect();
        let digest = Sha256::digest(&raw);
        assert_eq!(
            format!("{digest:x}"),
            "23ceaef5eb61f0e70d64ac18fdf0f60df3d5971cf30bbadac7b6ebf07f782d2c"
        );
    }

    #[test]
    fn compress_block_means() {
        // All-ones image → sixteen ones.
        let ones = RawImage {
            pixels: vec![1.0; 784],
            label: 0,
        };
        assert_eq!(compress(&ones), [1.0; 16]);

        // 1 on the top-left 7×7 block only.
        let mut px = vec![0.0; 784];
        for i in 0..7 {
            for j in 0..7 {
                px[i * 28 + j] = 1.0;
            }
        }
        let img = RawImage { pixels: px, label: 0 };
        let mut expect = [0.0; 16];
        expect[0] = 1.0;
        assert_eq!(compress(&img), expect);
    }

    #[test]
    fn compress_first_mnist_digit_matches_independent_oracle() {
        // Block means of training image 0 computed by an external script.
        let dir = default_mnist_dir();
        let data = load_mnist_train(&dir).unwrap();
        let u = compress(&data[0]);
        let expect = [
            0.0,
            6.0664265706282514e-02,
            1.8623449379751900e-01,
            9.0436174469787925e-02,
            0.0,
            4.7474989995998407e-01,
            2.3281312525010001e-01,
            7.6030412164865948e-03,
            0.0,
            7.0428171268507408e-02,
            5.5638255302120843e-01,
            0.0,
            8.9075630252100857e-02,
            3.8463385354141666e-01,
            4.9859943977591026e-02,
            0.0,
        ];
        for (got, want) in u.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn compress_is_intensity_linear() {
        let mut px = vec![0.0; 784];
        for (k, v) in px.iter_mut().enumerate() {
            *v = (k % 256) as f64 / 255.0;
        }
        let img = RawImage { pixels: px.clone(), label: 1 };
        let half = RawImage {
            pixels: px.iter().map(|v| 0.5 * v).collect(),
            label: 1,
        };
        let a = compress(&img);
        let b = compress(&half);
        for i in 0..16 {
            assert_abs_diff_eq!(b[i], 0.5 * a[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn alternating_signs_behavior() {
        let ones = [1.0; 16];
        let signed = apply_alternating_signs(&ones);
        for (i, v) in signed.iter().enumerate() {
            assert_eq!(*v, if i % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(apply_alternating_signs(&[0.0; 16]), [0.0; 16]);
        assert_eq!(apply_alternating_signs(&signed), ones);

        // Full pipeline keeps |u| ≤ 1.
        let img = RawImage {
            pixels: vec![1.0; 784],
            label: 9,
        };
        let sig = signal_from_image(&img);
        assert!(sig.u.iter().all(|v| v.abs() <= 1.0));
        assert_eq!(sig.label, 9);
    }

    #[test]
    fn split_is_seeded_disjoint_and_stable() {
        let (tr1, te1) = split_indices(100, 40, 10, 7).unwrap();
        let (tr2, te2) = split_indices(100, 40, 10, 7).unwrap();
        assert_eq!(tr1, tr2);
        assert_eq!(te1, te2);
        assert_eq!(tr1.len(), 40);
        assert_eq!(te1.len(), 10);
        assert!(tr1.iter().all(|i| !te1.contains(i)));

        let (tr3, _) = split_indices(100, 40, 10, 8).unwrap();
        assert_ne!(tr1, tr3);

        assert!(split_indices(100, 95, 10, 7).is_err());
        assert!(split_indices(100, 0, 10, 7).is_err());
    }
}
