/**
 * DOM rendering for the one-choice-per-screen questionnaire.
 *
 * Every displayed number is taken verbatim from the flow state (which holds
 * raw API payloads); this module formats, it never computes.
 */

import { FlowState } from "./flow.js";

export interface ViewHandlers {
  onChoose: (choseBet: boolean) => void;
  onRetry: () => void;
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function progressBar(answered: number, total: number): HTMLElement {
  const wrap = el("div", "progress");
  const fill = el("div", "progress-fill");
  fill.style.width = total > 0 ? `${(100 * answered) / total}%` : "0%";
  wrap.appendChild(fill);
  const label = el("span", "progress-label", `${answered} / ${total}`);
  wrap.appendChild(label);
  return wrap;
}

function renderQuestion(state: FlowState, handlers: ViewHandlers): HTMLElement {
  const q = state.question!;
  const screen = el("section", "screen question-screen");
  screen.appendChild(progressBar(state.answered, state.total));
  screen.appendChild(el("h2", "prompt", "Which would you rather have?"));

  const options = el("div", "options");
  const bet = el("button", "option option-bet");
  bet.setAttribute("data-testid", "choose-bet");
  bet.appendChild(el("div", "option-title", `${q.stake_text} if:`));
  bet.appendChild(el("div", "option-body", q.description));
  bet.addEventListener("click", () => handlers.onChoose(true));

  const lottery = el("button", "option option-lottery");
  lottery.setAttribute("data-testid", "choose-lottery");
  lottery.appendChild(el("div", "option-title", `${q.stake_text} with known chance:`));
  const wheel = el("div", "wheel");
  wheel.style.background = `conic-gradient(var(--win) 0 ${q.lottery_percent}%, var(--lose) ${q.lottery_percent}% 100%)`;
  wheel.setAttribute("role", "img");
  wheel.setAttribute("aria-label", `lottery wheel, ${q.lottery_percent}% winning share`);
  lottery.appendChild(wheel);
  lottery.appendChild(el("div", "option-body", `${q.lottery_percent}% chance to win`));
  lottery.addEventListener("click", () => handlers.onChoose(false));

  options.appendChild(bet);
  options.appendChild(lottery);
  screen.appendChild(options);
  screen.appendChild(
    el("p", "hint", "Press B for the bet, L for the lottery."),
  );
  return screen;
}

function renderResult(state: FlowState): HTMLElement {
  const result = state.result!;
  const screen = el("section", "screen result-screen");
  screen.appendChild(el("h2", "prompt", "Your elicited ranges"));

  const list = el("div", "intervals");
  for (const iv of result.intervals) {
    const row = el("div", "interval-row");
    row.setAttribute("data-testid", `interval-${iv.event}`);
    row.setAttribute("data-lb", String(iv.lb));
    row.setAttribute("data-ub", String(iv.ub));
    row.appendChild(el("div", "interval-label", iv.event.replaceAll("_", " ")));
    const track = el("div", "interval-track");
    const band = el("div", "interval-band");
    band.style.left = `${100 * iv.lb}%`;
    band.style.width = `${100 * (iv.ub - iv.lb)}%`;
    track.appendChild(band);
    row.appendChild(track);
    row.appendChild(
      el("div", "interval-range", `${(100 * iv.lb).toFixed(1)}% - ${(100 * iv.ub).toFixed(1)}%`),
    );
    list.appendChild(row);
  }
  screen.appendChild(list);

  const indices = el("div", "indices");
  indices.appendChild(
    el("p", "index-line", `aversion index: ${result.indices.aversion.toFixed(3)}`),
  );
  indices.appendChild(
    el("p", "index-line", `sensitivity index: ${result.indices.sensitivity.toFixed(3)}`),
  );
  const reading =
    result.indices.aversion > 0
      ? "your complementary bets sum below 100%, which suggests ambiguity aversion"
      : "your complementary bets sum to 100% or more, which suggests ambiguity tolerance";
  indices.appendChild(el("p", "index-reading", reading));
  screen.appendChild(indices);

  const audit = el("div", "audit");
  audit.setAttribute("data-testid", "commitment-audit");
  audit.appendChild(el("p", "audit-line", `revealed seed: ${result.seed}`));
  audit.appendChild(
    el(
      "p",
      state.commitmentVerified ? "audit-ok" : "audit-bad",
      state.commitmentVerified
        ? "payout pre-commitment verified against the digest shown at the start"
        : "WARNING: revealed seed does not match the pre-commitment digest",
    ),
  );
  audit.appendChild(
    el("p", "audit-line", `paid question #${result.payout.question}: ${result.payout.outcome.replaceAll("_", " ")}`),
  );
  screen.appendChild(audit);
  return screen;
}

export function render(root: HTMLElement, state: FlowState, handlers: ViewHandlers): void {
  root.replaceChildren();
  switch (state.phase) {
    case "idle":
    case "loading":
      root.appendChild(el("section", "screen", "loading..."));
      break;
    case "submitting": {
      const screen = el("section", "screen", "recording your choice...");
      root.appendChild(screen);
      break;
    }
    case "question":
      root.appendChild(renderQuestion(state, handlers));
      break;
    case "done":
      root.appendChild(renderResult(state));
      break;
    case "error": {
      const screen = el("section", "screen error-screen");
      screen.appendChild(el("p", "error-text", `${state.error?.code}: ${state.error?.message}`));
      if (state.error?.retryable) {
        const retry = el("button", "retry", "retry");
        retry.addEventListener("click", () => handlers.onRetry());
        screen.appendChild(retry);
      }
      root.appendChild(screen);
      break;
    }
  }
}

export function commitmentBanner(root: HTMLElement, commitment: string): void {
  const banner = el("div", "commitment-banner");
  banner.setAttribute("data-testid", "commitment-banner");
  banner.textContent = `payout question pre-committed: ${commitment}`;
  root.prepend(banner);
}
