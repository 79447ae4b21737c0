use std::fs;
use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use disguise_core::attack_eval::{
    examiner_accuracy, group_predictions, membership_attack_report, probe_groups,
    read_predictions_csv, train_examiner, visual_privacy, Examiner,
};
use disguise_core::dataset_io::{export_pnm, write_dgt, Normalization};
use disguise_core::keygen::{generate_key, serialize_key};
use disguise_core::keyspace::{KeyspaceQuery, KEYSPACE_LABEL};
use disguise_core::transform::{disguise_dataset, invert_dataset, unmap_labels};
use disguise_core::{Geometry, KeySpec, LabeledDataset, MatrixKind};
use log::{debug, info};

use crate::args::*;
use crate::io::{load_dataset, load_key, read_bytes, write_bytes};
use crate::UsageError;

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Keygen(a) => keygen(a, out),
        Command::Disguise(a) => disguise(a, out),
        Command::Invert(a) => invert(a, out),
        Command::EvalVisual(a) => eval_visual(a, out),
        Command::EvalMembership(a) => eval_membership(a, out),
        Command::Keyspace(a) => keyspace(a, out),
        Command::Export(a) => export(a, out),
    }
}

fn check_jobs(jobs: usize) -> Result<()> {
    if jobs == 0 {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    Ok(())
}

fn load_input(input: &InputArgs) -> Result<LabeledDataset> {
    let ds = load_dataset(
        &input.input,
        input.format,
        input.labels.as_deref(),
        input.classes,
    )?;
    Ok(match input.limit {
        Some(n) => ds.slice(0, n),
        None => ds,
    })
}

fn keygen(a: KeygenArgs, out: &mut dyn Write) -> Result<()> {
    let matrix_kind = match a.matrix {
        MatrixArg::Identity => MatrixKind::Identity,
        MatrixArg::Orthogonal => MatrixKind::Orthogonal,
        MatrixArg::Projection => MatrixKind::Projection,
    };
    let mut spec = KeySpec::new(
        Geometry::new(a.channels, a.height, a.width),
        a.block_rows,
        a.block_cols,
        matrix_kind,
        a.noise,
        a.classes,
        a.seed,
    );
    spec.permute_blocks = !a.no_permute;
    spec.permute_labels = !a.no_label_permute;
    let key = generate_key(&spec).context("cannot generate key")?;
    write_bytes(&a.out, &serialize_key(&key)?)?;
    info!("wrote key to {}", a.out.display());
    writeln!(out, "key={}", a.out.display())?;
    writeln!(out, "geometry={}", key.geometry)?;
    writeln!(out, "block={}x{}", key.block_rows, key.block_cols)?;
    writeln!(out, "blocks={}", key.block_count())?;
    writeln!(out, "matrix_kind={}", key.matrix_kind)?;
    writeln!(out, "noise_level={}", key.noise_level)?;
    writeln!(out, "classes={}", key.class_count())?;
    writeln!(out, "seed={}", key.seed)?;
    Ok(())
}

fn disguise(a: DisguiseArgs, out: &mut dyn Write) -> Result<()> {
    check_jobs(a.jobs)?;
    let key = load_key(&a.key)?;
    let ds = load_input(&a.input)?;
    debug!("loaded {} images of {}", ds.len(), ds.geometry());
    let start = Instant::now();
    let disguised =
        disguise_dataset(&ds, &key, a.seed, a.jobs).context("cannot disguise dataset")?;
    let elapsed = start.elapsed();
    write_bytes(&a.out, &write_dgt(&disguised)?)?;
    writeln!(out, "images={}", disguised.len())?;
    writeln!(out, "geometry={}", disguised.geometry())?;
    writeln!(out, "jobs={}", a.jobs)?;
    writeln!(out, "elapsed_ms={:.3}", elapsed.as_secs_f64() * 1e3)?;
    if !disguised.is_empty() {
        writeln!(
            out,
            "mean_latency_ms={:.6}",
            elapsed.as_secs_f64() * 1e3 / disguised.len() as f64
        )?;
    }
    writeln!(out, "output={}", a.out.display())?;
    Ok(())
}

fn invert(a: InvertArgs, out: &mut dyn Write) -> Result<()> {
    check_jobs(a.jobs)?;
    let key = load_key(&a.key)?;
    let ds = load_dataset(&a.input, Format::Dgt, None, key.class_count())?;
    let restored = invert_dataset(&ds, &key, a.jobs).context("cannot invert dataset")?;
    write_bytes(&a.out, &write_dgt(&restored)?)?;
    writeln!(out, "images={}", restored.len())?;
    writeln!(out, "output={}", a.out.display())?;
    Ok(())
}

fn build_examiner(train: &LabeledDataset, e: &ExaminerArgs) -> Result<Examiner> {
    check_jobs(e.jobs)?;
    train_examiner(train, e.knn_k, e.subsample, e.seed).context("cannot build examiner")
}

fn eval_visual(a: EvalVisualArgs, out: &mut dyn Write) -> Result<()> {
    let key = load_key(&a.key)?;
    let train = load_dataset(
        &a.train,
        a.train_format,
        a.train_labels.as_deref(),
        a.input.classes,
    )?;
    let examiner = build_examiner(&train, &a.examiner)?;
    let disguised = load_input(&a.input)?;
    let labels = unmap_labels(disguised.labels(), &key)?;
    let (geometry, class_count, space) = (
        disguised.geometry(),
        disguised.class_count(),
        disguised.space(),
    );
    let (images, _) = disguised.into_parts();
    let scored = LabeledDataset::new(geometry, images, labels, class_count, space)?;
    let accuracy = in_pool(a.examiner.jobs, || {
        Ok(examiner_accuracy(&examiner, &scored)?)
    })?;
    writeln!(out, "examiner_train_size={}", examiner.len())?;
    writeln!(out, "examiner_k={}", examiner.neighbors())?;
    writeln!(out, "test_size={}", scored.len())?;
    writeln!(out, "examiner_accuracy={accuracy:.6}")?;
    writeln!(out, "visual_privacy={:.6}", visual_privacy(accuracy)?)?;
    Ok(())
}

fn eval_membership(a: EvalMembershipArgs, out: &mut dyn Write) -> Result<()> {
    let report = if let Some(paths) = &a.predictions {
        let read = |p: &std::path::Path| -> Result<_> {
            let bytes = read_bytes(p)?;
            read_predictions_csv(bytes.as_slice())
                .with_context(|| format!("invalid predictions file {}", p.display()))
        };
        let inside = group_predictions(&read(&paths[0])?);
        let outside = group_predictions(&read(&paths[1])?);
        writeln!(out, "mode=external")?;
        membership_attack_report(&inside, &outside, a.classes, a.alpha)?
    } else {
        let missing = |flag: &str| UsageError(format!("{flag} is required without --predictions"));
        let train_path = a.train.as_deref().ok_or_else(|| missing("--train"))?;
        let mut train = load_dataset(
            train_path,
            a.train_format,
            a.train_labels.as_deref(),
            a.classes,
        )?;
        if let Some(n) = a.train_per_class {
            train = train.class_balanced(n);
        }
        let model = build_examiner(&train, &a.examiner)?;
        let load_probes =
            |path: Option<&std::path::Path>, labels, flag| -> Result<LabeledDataset> {
                let ds = load_dataset(
                    path.ok_or_else(|| missing(flag))?,
                    a.probe_format,
                    labels,
                    a.classes,
                )?;
                Ok(match a.probes_per_class {
                    Some(n) => ds.class_balanced(n),
                    None => ds,
                })
            };
        let in_probes = load_probes(
            a.in_probes.as_deref(),
            a.in_labels.as_deref(),
            "--in-probes",
        )?;
        let out_probes = load_probes(
            a.out_probes.as_deref(),
            a.out_labels.as_deref(),
            "--out-probes",
        )?;
        let (inside, outside) = in_pool(a.examiner.jobs, || -> Result<_> {
            Ok((
                probe_groups(&model, &in_probes)?,
                probe_groups(&model, &out_probes)?,
            ))
        })?;
        writeln!(out, "mode=nearest-neighbour")?;
        writeln!(out, "model_space={:?}", train.space())?;
        writeln!(out, "model_train_size={}", model.len())?;
        membership_attack_report(&inside, &outside, model.class_count(), a.alpha)?
    };
    writeln!(out, "{report}")?;
    Ok(())
}

/// Runs `job` on a dedicated pool so `--jobs` bounds the worker count.
fn in_pool<T: Send>(jobs: usize, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    check_jobs(jobs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("cannot start worker pool")?;
    pool.install(job)
}

fn keyspace(a: KeyspaceArgs, out: &mut dyn Write) -> Result<()> {
    let q = KeyspaceQuery::new(a.bits, a.dim, a.shares)?;
    writeln!(out, "# {KEYSPACE_LABEL}")?;
    writeln!(out, "bits={} dim={} shares={}", q.bits, q.dim, q.shares)?;
    writeln!(out, "orthogonal_log2={}", q.log2_orthogonal_count())?;
    writeln!(out, "keyspace_log2={}", q.log2_combined())?;
    Ok(())
}

fn export(a: ExportArgs, out: &mut dyn Write) -> Result<()> {
    let ds = load_input(&a.input)?;
    let normalization = match a.normalization {
        NormalizationArg::Clamp => Normalization::Clamp,
        NormalizationArg::Minmax => Normalization::MinMax,
    };
    let end = a.index.saturating_add(a.count).min(ds.len());
    if a.index >= end {
        return Err(UsageError(format!(
            "--index {} is outside the {} available images",
            a.index,
            ds.len()
        ))
        .into());
    }
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    let ext = if ds.geometry().channels == 1 {
        "pgm"
    } else {
        "ppm"
    };
    for i in a.index..end {
        let bytes = export_pnm(&ds.images()[i], normalization)?;
        let path = a.out.join(format!("{}{:05}.{ext}", a.prefix, i));
        write_bytes(&path, &bytes)?;
        writeln!(out, "wrote={}", path.display())?;
    }
    Ok(())
}
