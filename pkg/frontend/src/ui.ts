// DOM rendering and event wiring. The controller owns the state and
// re-renders the whole view on every transition; pre-reveal screens are
// rendered from the anonymized trial payload alone, and authorship
// badges come exclusively from the server's reveal response.

import { ApiClient, ApiError } from "./api.js";
import type { Position, TrialPayload } from "./api.js";
import {
  applyRatingsAck,
  applyReveal,
  beginSubmit,
  failSubmit,
  generatedPosition,
  initialState,
  markExhausted,
  proceedToRating,
  selectPoem,
  setConfidence,
  setRating,
  startTrial,
  toggleVertical,
  type RatingsDraft,
  type UiTrialState,
} from "./state.js";

const RATING_LABELS: Record<keyof RatingsDraft, string> = {
  thematic_faithfulness: "Thematic faithfulness 主题契合",
  artistic_merit: "Artistic merit 艺术感染力",
  overall_quality: "Overall quality 整体质量",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function scoreSlider(
  label: string,
  value: number,
  onInput: (value: number) => void,
  testId: string,
): HTMLElement {
  const wrap = el("div", "slider-row");
  const caption = el("label", "slider-label", label);
  const input = el("input");
  input.type = "range";
  input.min = "1";
  input.max = "5";
  input.step = "1";
  input.value = String(value);
  input.dataset.testid = testId;
  const display = el("span", "slider-value", String(value));
  input.addEventListener("input", () => {
    onInput(Number(input.value));
  });
  wrap.append(caption, input, display);
  return wrap;
}

export class EvalApp {
  state: UiTrialState = initialState();

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private evaluatorId: string,
  ) {}

  private setState(next: UiTrialState): void {
    this.state = next;
    this.render();
  }

  async start(): Promise<void> {
    await this.fetchNext();
  }

  async fetchNext(): Promise<void> {
    try {
      const response = await this.api.nextTrial(this.evaluatorId);
      if ("exhausted" in response) {
        this.setState(markExhausted(this.state, response.completed));
      } else {
        this.setState(startTrial(this.state, response.trial));
      }
    } catch (err) {
      const detail = err instanceof ApiError ? err.detail : String(err);
      this.setState({ ...this.state, error: detail });
    }
  }

  onSelect(choice: Position): void {
    this.setState(selectPoem(this.state, choice));
  }

  onConfidence(value: number): void {
    this.setState(setConfidence(this.state, value));
  }

  onRating(dimension: keyof RatingsDraft, value: number): void {
    this.setState(setRating(this.state, dimension, value));
  }

  onToggleVertical(): void {
    this.setState(toggleVertical(this.state));
  }

  async onSubmitChoice(): Promise<void> {
    const { trial, choice, confidence, submitting, stage } = this.state;
    if (submitting || stage !== "Confidence" || !trial || !choice) return;
    this.setState(beginSubmit(this.state));
    try {
      const reveal = await this.api.submitChoice(trial.trial_id, choice, confidence);
      this.setState(applyReveal(this.state, reveal));
    } catch (err) {
      const detail = err instanceof ApiError ? err.detail : String(err);
      this.setState(failSubmit(this.state, detail));
    }
  }

  onProceedToRating(): void {
    this.setState(proceedToRating(this.state));
  }

  async onSubmitRatings(): Promise<void> {
    const { trial, ratings, submitting, stage } = this.state;
    if (submitting || stage !== "Rating" || !trial) return;
    this.setState(beginSubmit(this.state));
    try {
      await this.api.submitRatings(trial.trial_id, ratings);
      this.setState(applyRatingsAck(this.state));
      await this.fetchNext();
    } catch (err) {
      const detail = err instanceof ApiError ? err.detail : String(err);
      this.setState(failSubmit(this.state, detail));
    }
  }

  // -- rendering ------------------------------------------------------------

  render(): void {
    const { state } = this;
    this.root.replaceChildren();

    if (state.error) {
      const banner = el("div", "error-banner");
      banner.append(el("span", "error-text", state.error));
      const retry = el("button", "retry", "Retry 重试");
      retry.dataset.testid = "retry";
      retry.addEventListener("click", () => {
        if (state.trial && state.stage !== "Done") {
          this.setState({ ...state, error: null });
        } else {
          void this.fetchNext();
        }
      });
      banner.append(retry);
      this.root.append(banner);
      if (!state.trial) return;
    }

    switch (state.stage) {
      case "Comparing":
      case "Confidence":
        this.renderComparison();
        break;
      case "Revealed":
        this.renderReveal();
        break;
      case "Rating":
        this.renderRating();
        break;
      case "Done":
        this.renderDone();
        break;
    }
  }

  private header(trial: TrialPayload): HTMLElement {
    const head = el("header", "trial-header");
    head.append(el("h2", "cipai", trial.cipai_name));
    head.append(el("span", "theme", `主题 Theme: ${trial.theme}`));
    head.append(
      el(
        "span",
        "progress",
        `${trial.progress.completed} / ${trial.progress.total}`,
      ),
    );
    const toggleWrap = el("label", "vertical-toggle");
    const toggle = el("input");
    toggle.type = "checkbox";
    toggle.checked = this.state.vertical;
    toggle.dataset.testid = "vertical-toggle";
    toggle.addEventListener("change", () => this.onToggleVertical());
    toggleWrap.append(toggle, el("span", undefined, "竖排 vertical"));
    head.append(toggleWrap);
    return head;
  }

  private poemCard(label: string, lines: string[], selectable: boolean): HTMLElement {
    const position: Position = label === "A" ? "First" : "Second";
    const card = el("article", "poem-card");
    card.dataset.testid = `poem-${label}`;
    if (this.state.vertical) card.classList.add("vertical");
    if (this.state.choice === position) card.classList.add("selected");
    card.append(el("h3", "poem-label", `Poem ${label}`));
    const body = el("div", "poem-body");
    for (const line of lines) {
      body.append(el("p", "poem-line", line));
    }
    card.append(body);
    if (selectable) {
      card.tabIndex = 0;
      card.addEventListener("click", () => this.onSelect(position));
    }
    return card;
  }

  private renderComparison(): void {
    const trial = this.state.trial;
    if (!trial) return;
    this.root.append(this.header(trial));
    this.root.append(
      el("p", "instruction", "你认为哪一首是由人写的？ Which poem do you think was written by a person?"),
    );
    const row = el("div", "poem-row");
    for (const poem of trial.poems) {
      row.append(this.poemCard(poem.label, poem.lines, true));
    }
    this.root.append(row);

    if (this.state.stage === "Confidence") {
      const panel = el("section", "confidence-panel");
      panel.append(
        scoreSlider(
          "Confidence 把握程度 (1-5)",
          this.state.confidence,
          (value) => this.onConfidence(value),
          "confidence",
        ),
      );
      const submit = el("button", "primary", "Submit choice 提交选择");
      submit.dataset.testid = "submit-choice";
      submit.disabled = this.state.submitting;
      submit.addEventListener("click", () => void this.onSubmitChoice());
      panel.append(submit);
      this.root.append(panel);
    }
  }

  private renderReveal(): void {
    const { trial, reveal } = this.state;
    if (!trial || !reveal) return;
    this.root.append(this.header(trial));
    const panel = el("section", "reveal-panel");
    panel.append(
      el(
        "p",
        "reveal-text",
        reveal.correct
          ? "答对了！ You picked the human-written poem."
          : "没猜中。 The other poem was the human-written one.",
      ),
    );
    const row = el("div", "poem-row");
    for (const poem of trial.poems) {
      const card = this.poemCard(poem.label, poem.lines, false);
      const position: Position = poem.label === "A" ? "First" : "Second";
      const badge = el(
        "span",
        position === reveal.human ? "badge badge-human" : "badge badge-generated",
        position === reveal.human ? "Human 人作" : "Generated 机器生成",
      );
      card.prepend(badge);
      row.append(card);
    }
    panel.append(row);
    const next = el("button", "primary", "Rate the generated poem 为机器生成的词评分");
    next.dataset.testid = "proceed-rating";
    next.addEventListener("click", () => this.onProceedToRating());
    panel.append(next);
    this.root.append(panel);
  }

  private renderRating(): void {
    const { trial, reveal, ratings } = this.state;
    if (!trial || !reveal) return;
    this.root.append(this.header(trial));
    const generated = generatedPosition(reveal);
    const poem = trial.poems[generated === "First" ? 0 : 1];
    const panel = el("section", "rating-panel");
    panel.append(el("p", "instruction", `Rate the generated poem (Poem ${poem.label}) 请为下面这首机器生成的词打分：`));
    panel.append(this.poemCard(poem.label, poem.lines, false));
    for (const dimension of Object.keys(RATING_LABELS) as (keyof RatingsDraft)[]) {
      panel.append(
        scoreSlider(
          `${RATING_LABELS[dimension]} (1-5)`,
          ratings[dimension],
          (value) => this.onRating(dimension, value),
          `rating-${dimension}`,
        ),
      );
    }
    const submit = el("button", "primary", "Submit ratings 提交评分");
    submit.dataset.testid = "submit-ratings";
    submit.disabled = this.state.submitting;
    submit.addEventListener("click", () => void this.onSubmitRatings());
    panel.append(submit);
    this.root.append(panel);
  }

  private renderDone(): void {
    const panel = el("section", "done-panel");
    panel.append(el("h2", undefined, "完成 All done"));
    panel.append(
      el(
        "p",
        "done-count",
        `You completed ${this.state.completedTrials} trial(s). 感谢参与！`,
      ),
    );
    panel.dataset.testid = "done";
    this.root.append(panel);
  }
}
