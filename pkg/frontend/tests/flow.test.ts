// Full UI flow against a mocked API: POST discipline, widget ranges,
// authorship hidden until the reveal response, retry affordance.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import type { NextTrialResponse, RevealResponse, TrialPayload } from "../src/api.js";
import { EvalApp } from "../src/ui.js";

function trialPayload(id: string, completed = 0): TrialPayload {
  return {
    trial_id: id,
    cipai_name: "卜算子 (Bu Suan Zi)",
    theme: "SorrowGrief",
    poems: [
      { label: "A", lines: ["一二三四五", "六七八九十"] },
      { label: "B", lines: ["甲乙丙丁戊", "己庚辛壬癸"] },
    ],
    progress: { completed, total: 2 },
  };
}

interface Recorded {
  method: string;
  url: string;
  body: unknown;
}

class FakeServer {
  requests: Recorded[] = [];
  nextQueue: (NextTrialResponse | { networkError: true })[] = [];
  revealQueue: (RevealResponse | { status: number; detail: string })[] = [];
  choiceDelay: Promise<void> | null = null;

  posts(path: string): Recorded[] {
    return this.requests.filter(
      (r) => r.method === "POST" && r.url.includes(path),
    );
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    this.requests.push({ method, url, body });

    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    if (url.includes("/api/evaluators")) {
      return json({ evaluator_id: body.evaluator_id, total_pairs: 2 });
    }
    if (url.includes("/api/trials/next")) {
      const next = this.nextQueue.shift();
      if (!next) return json({ exhausted: true, completed: 0 });
      if ("networkError" in next) throw new TypeError("fetch failed");
      return json(next);
    }
    if (url.includes("/choice")) {
      if (this.choiceDelay) await this.choiceDelay;
      const reveal = this.revealQueue.shift();
      if (!reveal) throw new Error("no scripted reveal");
      if ("status" in reveal) {
        return json({ detail: reveal.detail }, reveal.status);
      }
      return json(reveal);
    }
    if (url.includes("/ratings")) {
      return json({ ok: true });
    }
    throw new Error(`unscripted request: ${method} ${url}`);
  };
}

let server: FakeServer;
let root: HTMLElement;
let app: EvalApp;

function makeApp(): EvalApp {
  vi.stubGlobal("fetch", server.fetch);
  root = document.createElement("main");
  document.body.replaceChildren(root);
  return new EvalApp(new ApiClient(""), root, "eva");
}

function click(testId: string): void {
  const node = root.querySelector<HTMLElement>(`[data-testid="${testId}"]`);
  if (!node) throw new Error(`no element with testid ${testId}`);
  node.click();
}

function slide(testId: string, rawValue: string): void {
  const input = root.querySelector<HTMLInputElement>(
    `[data-testid="${testId}"]`,
  );
  if (!input) throw new Error(`no slider ${testId}`);
  input.value = rawValue;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

beforeEach(() => {
  server = new FakeServer();
  app = makeApp();
});

const FORBIDDEN_PRE_REVEAL = ["Human", "human", "人作", "Generated", "机器生成", "badge"];

describe("happy path", () => {
  it("emits exactly one POST per stage and finishes with a count", async () => {
    server.nextQueue = [
      { trial: trialPayload("trial-0", 0) },
      { exhausted: true, completed: 1 },
    ];
    server.revealQueue = [{ trial_id: "trial-0", human: "Second", correct: false }];

    await app.start();
    expect(app.state.stage).toBe("Comparing");
    for (const word of FORBIDDEN_PRE_REVEAL) {
      expect(root.innerHTML).not.toContain(word);
    }

    click("poem-A");
    expect(app.state.stage).toBe("Confidence");
    for (const word of FORBIDDEN_PRE_REVEAL) {
      expect(root.innerHTML).not.toContain(word);
    }

    slide("confidence", "4");
    await app.onSubmitChoice();
    expect(app.state.stage).toBe("Revealed");
    expect(root.innerHTML).toContain("人作");

    click("proceed-rating");
    expect(app.state.stage).toBe("Rating");
    slide("rating-thematic_faithfulness", "4");
    slide("rating-artistic_merit", "3");
    slide("rating-overall_quality", "5");
    await app.onSubmitRatings();

    expect(server.posts("/choice")).toHaveLength(1);
    expect(server.posts("/ratings")).toHaveLength(1);
    expect(server.posts("/choice")[0].body).toEqual({
      choice: "First",
      confidence: 4,
    });
    expect(server.posts("/ratings")[0].body).toEqual({
      thematic_faithfulness: 4,
      artistic_merit: 3,
      overall_quality: 5,
    });

    // the follow-up fetch hit the exhausted branch
    expect(app.state.stage).toBe("Done");
    expect(root.querySelector('[data-testid="done"]')).toBeTruthy();
    expect(root.innerHTML).toContain("1 trial");
  });

  it("reveal markup comes only from the server response", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    server.revealQueue = [{ trial_id: "trial-0", human: "First", correct: true }];
    await app.start();
    click("poem-B");
    await app.onSubmitChoice();
    const cardA = root.querySelector('[data-testid="poem-A"]')!;
    const cardB = root.querySelector('[data-testid="poem-B"]')!;
    expect(cardA.innerHTML).toContain("人作");
    expect(cardB.innerHTML).toContain("机器生成");
  });
});

describe("double-submit suppression", () => {
  it("rapid double submit of the choice produces a single POST", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    let release!: () => void;
    server.choiceDelay = new Promise((resolve) => {
      release = resolve;
    });
    server.revealQueue = [{ trial_id: "trial-0", human: "Second", correct: true }];

    await app.start();
    click("poem-A");
    const first = app.onSubmitChoice();
    const second = app.onSubmitChoice(); // in flight: must be a no-op
    release();
    await Promise.all([first, second]);
    expect(server.posts("/choice")).toHaveLength(1);
    expect(app.state.stage).toBe("Revealed");
  });

  it("button double-click also produces a single POST", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    let release!: () => void;
    server.choiceDelay = new Promise((resolve) => {
      release = resolve;
    });
    server.revealQueue = [{ trial_id: "trial-0", human: "Second", correct: true }];
    await app.start();
    click("poem-A");
    click("submit-choice");
    click("submit-choice");
    release();
    await vi.waitFor(() => expect(app.state.stage).toBe("Revealed"));
    expect(server.posts("/choice")).toHaveLength(1);
  });
});

describe("widget ranges", () => {
  it("cannot emit out-of-range confidence even with a forged input value", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    server.revealQueue = [{ trial_id: "trial-0", human: "Second", correct: true }];
    await app.start();
    click("poem-A");
    slide("confidence", "99");
    expect(app.state.confidence).toBe(5);
    slide("confidence", "-2");
    expect(app.state.confidence).toBe(1);
    await app.onSubmitChoice();
    const sent = server.posts("/choice")[0].body as { confidence: number };
    expect(sent.confidence).toBeGreaterThanOrEqual(1);
    expect(sent.confidence).toBeLessThanOrEqual(5);
  });

  it("cannot emit out-of-range ratings", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    server.revealQueue = [{ trial_id: "trial-0", human: "First", correct: false }];
    await app.start();
    click("poem-B");
    await app.onSubmitChoice();
    click("proceed-rating");
    slide("rating-artistic_merit", "700");
    slide("rating-overall_quality", "0");
    await app.onSubmitRatings();
    const sent = server.posts("/ratings")[0].body as Record<string, number>;
    for (const value of Object.values(sent)) {
      expect(Number.isInteger(value)).toBe(true);
      expect(value).toBeGreaterThanOrEqual(1);
      expect(value).toBeLessThanOrEqual(5);
    }
  });
});

describe("failure handling", () => {
  it("unreachable server shows a retry banner and retry refetches", async () => {
    server.nextQueue = [
      { networkError: true },
      { trial: trialPayload("trial-0") },
    ];
    await app.start();
    expect(root.querySelector('[data-testid="retry"]')).toBeTruthy();
    click("retry");
    await vi.waitFor(() => expect(app.state.stage).toBe("Comparing"));
    expect(root.querySelector('[data-testid="poem-A"]')).toBeTruthy();
  });

  it("server-side stage errors are surfaced verbatim and state is preserved", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    server.revealQueue = [
      { status: 409, detail: "trial trial-0 is in stage revealed; choice already submitted" },
    ];
    await app.start();
    click("poem-A");
    await app.onSubmitChoice();
    expect(app.state.stage).toBe("Confidence"); // unchanged
    expect(root.innerHTML).toContain("choice already submitted");
  });

  it("exhausted on first fetch shows the completion screen", async () => {
    server.nextQueue = [{ exhausted: true, completed: 30 }];
    await app.start();
    expect(app.state.stage).toBe("Done");
    expect(root.innerHTML).toContain("30 trial");
  });
});

describe("vertical layout toggle", () => {
  it("is a pure css class flip", async () => {
    server.nextQueue = [{ trial: trialPayload("trial-0") }];
    await app.start();
    expect(root.querySelector(".poem-card.vertical")).toBeNull();
    click("vertical-toggle");
    expect(root.querySelector(".poem-card.vertical")).toBeTruthy();
    expect(server.posts("/")).toHaveLength(0); // rendering performs no network writes
  });
});
