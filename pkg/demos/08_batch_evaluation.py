"""
Manifest-driven batch evaluation
================================

Build a miniature two-entry corpus on disk (frames + WAV + landmark,
embedding, transcript sidecars), then run the `talkeval eval`, `blink`
and `pairs` commands against it. Everything lands in demos/output/batch.
"""

import csv
import json
from pathlib import Path

import numpy as np

from talkeval import AudioClip, EmbeddingSeries, FrameSequence
from talkeval import save_audio, save_embeddings, save_frame_sequence
from talkeval.cli import main

root = Path(__file__).parent / "output" / "batch"
root.mkdir(parents=True, exist_ok=True)
rng = np.random.default_rng(6)

N_FRAMES, FPS, RATE = 24, 25.0, 16000
entries = []
for entry_id in ("gen_a", "gen_b"):
    entry = root / entry_id
    entry.mkdir(exist_ok=True)

    # frames: flat face with strong structures so CPBD has edges
    base = np.full((64, 64, 3), 35, np.float64)
    base[:, 12:22] = [205, 175, 145]
    base[20:50, 40:52] = [225, 225, 70]
    frames = np.clip(
        base + rng.normal(0, 2, (N_FRAMES, 64, 64, 3)), 0, 255
    ).astype(np.uint8)
    save_frame_sequence(FrameSequence(width=64, height=64, fps=FPS, frames=frames), entry / "frames")

    seconds = N_FRAMES / FPS
    tone = 2000 * np.sin(np.arange(int(RATE * seconds)) * 0.04)
    save_audio(AudioClip(sample_rate=RATE, samples=tone.astype(np.int16)), entry / "audio.wav")

    # landmarks: eye6 layout, one blink dipping EAR from 0.30 to 0.05
    with open(entry / "landmarks.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "point", "x", "y"])
        for f in range(N_FRAMES):
            closeness = max(0.0, 1.0 - abs(f - 12) / 3.0)
            half = 0.3 * (1.0 - closeness * (1 - 0.05 / 0.30))
            for eye, x0 in ((0, 10.0), (6, 30.0)):
                pts = [(x0, 5.0), (x0 + 1, 5 - half), (x0 + 3, 5 - half),
                       (x0 + 4, 5.0), (x0 + 3, 5 + half), (x0 + 1, 5 + half)]
                for p, (x, y) in enumerate(pts):
                    writer.writerow([f, eye + p, x, y])

    emb = rng.normal(size=(N_FRAMES, 16))
    save_embeddings(EmbeddingSeries(vectors=emb, dim=16), entry / "video_emb.csv")
    save_embeddings(EmbeddingSeries(vectors=emb + rng.normal(0, 0.2, emb.shape), dim=16),
                    entry / "audio_emb.csv")
    save_embeddings(EmbeddingSeries(vectors=emb[:1], dim=16), entry / "still_emb.csv")
    (entry / "ref.txt").write_text("set blue at c nine now")
    (entry / "hyp.txt").write_text("set blue at sea nine now")

    entries.append({
        "id": entry_id,
        "frames_dir": f"{entry_id}/frames",
        "meta": {"landmarks_layout": "eye6"},
        "audio_path": f"{entry_id}/audio.wav",
        "landmarks_path": f"{entry_id}/landmarks.csv",
        "video_embeddings_path": f"{entry_id}/video_emb.csv",
        "audio_embeddings_path": f"{entry_id}/audio_emb.csv",
        "still_embedding_path": f"{entry_id}/still_emb.csv",
        "transcript_ref": f"{entry_id}/ref.txt",
        "transcript_hyp": f"{entry_id}/hyp.txt",
    })

manifest = root / "manifest.json"
manifest.write_text(json.dumps(entries, indent=2))

# identity-reference run: PSNR infinite, SSIM 1.0, WER > 0 (one substitution)
code = main(["eval", "--manifest", str(manifest), "--reference", str(manifest),
             "--out", str(root / "report.json")])
print("eval exit code:", code)
report = json.loads((root / "report.json").read_text())
for row in report["rows"]:
    print(" ", {k: row[k] for k in ("id", "psnr", "ssim", "wer", "blinks_per_sec")})

main(["blink", "--manifest", str(manifest), "--out", str(root / "blink")])
print("blink stats:", (root / "blink" / "stats.json").read_text().strip())

main(["pairs", "--manifest", str(manifest), "--out", str(root / "pairs"),
      "--seed", "3", "--anchors", "2"])
print("first pair record:",
      (root / "pairs" / "gen_a.pairs.jsonl").read_text().splitlines()[0])
