/**
 * End-to-end: scripted session against the live service.
 *
 * Spawns the Python service, drives a depth-3 elicitation through the flow
 * controller exactly as the browser would, and checks that (a) the displayed
 * intervals equal a direct engine replay with the identical choices, and
 * (b) the commitment digest shown at the start verifies against the seed
 * revealed at the end.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { ApiClient } from "../src/api.js";
import { SessionFlow } from "../src/flow.js";
import { verifyCommitment } from "../src/verify.js";

const PORT = 8765 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;
let service: ChildProcess;

async function waitForHealth(timeoutMs = 20_000): Promise<void> {
  const api = new ApiClient(BASE);
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      await api.health();
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 250));
    }
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const logDir = mkdtempSync(join(tmpdir(), "elicit-"));
  service = spawn(
    "python3",
    ["-m", "beliefhedge.cli", "elicit-serve", "--log", join(logDir, "events.jsonl"), "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealth();
}, 30_000);

afterAll(() => {
  service?.kill();
});

/** Deterministic scripted respondent: a pure function of event and probe. */
function scriptedChoice(event: string, lotteryPercent: number): boolean {
  return (event.length * 7 + Math.round(lotteryPercent)) % 3 !== 0;
}

describe("scripted browser session", () => {
  it("completes depth-3 elicitation matching a direct engine run", async () => {
    const api = new ApiClient(BASE);
    const states: string[] = [];
    const flow = new SessionFlow(api, (s) => states.push(s.phase));

    await flow.start({ depth: 3, seed: 424242, respondent: "e2e", wave: "1" });
    expect(flow.state.phase).toBe("question");
    const commitmentAtStart = flow.state.session!.commitment;

    const choices: boolean[] = [];
    while (flow.state.phase === "question") {
      const q = flow.state.question!;
      const choseBet = scriptedChoice(q.event, q.lottery_percent);
      choices.push(choseBet);
      const accepted = await flow.choose(choseBet);
      expect(accepted).toBe(true);
    }
    expect(flow.state.phase).toBe("done");
    expect(choices.length).toBe(18); // 6 events x depth 3

    // oracle: identical choices through the engine directly
    const replay = spawnSync("python3", [join(__dirname, "replay_engine.py")], {
      input: JSON.stringify({
        seed: 424242,
        depth: 3,
        respondent: "e2e",
        wave: "1",
        choices,
      }),
      encoding: "utf-8",
    });
    expect(replay.status).toBe(0);
    const engine = JSON.parse(replay.stdout) as {
      intervals: Array<{ event: string; lb: number; ub: number }>;
      commitment: string;
    };

    const displayed = flow.state.result!.intervals;
    const engineByEvent = new Map(engine.intervals.map((iv) => [iv.event, iv]));
    expect(displayed.length).toBe(6);
    for (const iv of displayed) {
      const oracle = engineByEvent.get(iv.event)!;
      expect(iv.lb).toBe(oracle.lb);
      expect(iv.ub).toBe(oracle.ub);
    }

    // commitment shown at start verifies against the revealed seed
    expect(engine.commitment).toBe(commitmentAtStart);
    const verified = await verifyCommitment(
      commitmentAtStart,
      flow.state.result!.seed,
      "e2e",
      "1",
      3,
    );
    expect(verified).toBe(true);
    expect(flow.state.commitmentVerified).toBe(true);
  }, 30_000);

  it("resumes mid-session at the same question after a refresh", async () => {
    const api = new ApiClient(BASE);
    const flow = new SessionFlow(api);
    await flow.start({ depth: 3, seed: 777, respondent: "refresh", wave: "1" });
    await flow.choose(true);
    await flow.choose(false);
    const questionBefore = flow.state.question;

    // a page refresh constructs a fresh controller for the same session
    const resumed = new SessionFlow(api);
    await resumed.resume(flow.state.session!);
    expect(resumed.state.phase).toBe("question");
    expect(resumed.state.question).toEqual(questionBefore);
    expect(resumed.state.answered).toBe(2);
  }, 30_000);
});
