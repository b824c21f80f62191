import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

/** Spawn the Python service with mock providers and wait for /healthz. */
export async function startServer(port: number): Promise<ChildProcess> {
  // empty data_dir keeps every run in memory, so nothing leaks between runs
  const configPath = join(mkdtempSync(join(tmpdir(), "console-test-")), "config.yaml");
  writeFileSync(configPath, 'data_dir: ""\n');
  const proc = spawn(
    "interviewkit",
    ["serve", "--mock", "--port", String(port), "--config", configPath],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  proc.stderr?.on("data", (chunk) => {
    stderr += String(chunk);
  });

  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited with ${proc.exitCode}: ${stderr.slice(-800)}`);
    }
    try {
      const resp = await fetch(`http://127.0.0.1:${port}/healthz`);
      if (resp.ok) return proc;
    } catch {
      // not listening yet
    }
    await sleep(200);
  }
  proc.kill();
  throw new Error(`server did not come up on port ${port}: ${stderr.slice(-800)}`);
}

export async function stopServer(proc: ChildProcess): Promise<void> {
  if (proc.exitCode !== null) return;
  const done = new Promise<void>((resolve) => proc.once("exit", () => resolve()));
  proc.kill("SIGTERM");
  await Promise.race([done, sleep(3000).then(() => proc.kill("SIGKILL"))]);
}
