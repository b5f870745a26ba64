#!/usr/bin/env python3
"""Regenerates tests/fixtures/corpus/traces.jsonl.

The fixture corpus is frozen; this script only documents how it was built.
Each Python program below is tokenized with the standard tokenize module
(comments and blank non-logical lines dropped, as a detokenizing decoder
would emit them) and given deterministic per-token probabilities derived
from SHA-256, so the output is identical on every run.
"""

import hashlib
import io
import json
import sys
import tokenize

PROGRAMS = [
    ("lc0001-two-sum",
     "class Solution {\n  public int[] twoSum(int[] nums, int target) {\n    Map<Integer,Integer> seen = new HashMap<>();\n    for (int i = 0; i < nums.length; i++) {\n      if (seen.containsKey(target - nums[i])) return new int[]{seen.get(target - nums[i]), i};\n      seen.put(nums[i], i);\n    }\n    return null;\n  }\n}\n",
     """class Solution:
    def twoSum(self, nums, target):
        seen = {}
        for i in range(len(nums)):
            if target - nums[i] in seen:
                return [seen[target - nums[i]], i]
            seen[nums[i]] = i
        return None
"""),
    ("lc0053-max-subarray",
     "class Solution {\n  public int maxSubArray(int[] nums) {\n    int max = nums[0], cur = 0;\n    for (int n : nums) { cur = Math.max(n, cur + n); max = Math.max(max, cur); }\n    return max;\n  }\n}\n",
     """class Solution:
    def maxSubArray(self, nums):
        max = nums[0]
        cur = 0
        for n in nums:
            cur = max(n, cur + n)
            max = max(max, cur)
        return max
"""),
    ("lc0070-climb-stairs",
     "class Solution {\n  public int climbStairs(int n) {\n    int a = 1, b = 1;\n    for (int i = 2; i <= n; i++) { int t = a + b; a = b; b = t; }\n    return b;\n  }\n}\n",
     """class Solution:
    def climbStairs(self, n):
        a = 1
        b = 1
        for i in range(2, n + 1):
            t = a + b
            a = b
            b = t
        return b
"""),
    ("lc0121-stock",
     "class Solution {\n  public int maxProfit(int[] prices) {\n    int min = Integer.MAX_VALUE, best = 0;\n    for (int p : prices) { min = Math.min(min, p); best = Math.max(best, p - min); }\n    return best;\n  }\n}\n",
     """class Solution(object):
    def maxProfit(self, prices):
        min = Integer.MAX_VALUE
        best = 0
        for p in prices:
            min = min(min, p)
            best = max(best, p - min)
        return best
"""),
    ("lc0136-single-number",
     "class Solution {\n  public int singleNumber(int[] nums) {\n    int x = 0;\n    for (int n : nums) x ^= n;\n    return x;\n  }\n}\n",
     """class Solution:
    def singleNumber(self, nums):
        x = 0
        for n in nums:
            x ^= n
        return x
"""),
    ("lc0169-majority",
     "class Solution {\n  public int majorityElement(int[] nums) {\n    int count = 0, cand = 0;\n    for (int n : nums) { if (count == 0) cand = n; count += (n == cand) ? 1 : -1; }\n    return cand;\n  }\n}\n",
     """class Solution:
    def majorityElement(self, nums):
        count = 0
        cand = 0
        for n in nums:
            if count == 0:
                cand = n
            count += (1 if n == cand else -1)
        return cand
"""),
    ("lc0206-reverse-list",
     "class Solution {\n  public ListNode reverseList(ListNode head) {\n    ListNode prev = null;\n    while (head != null) { ListNode next = head.next; head.next = prev; prev = head; head = next; }\n    return prev;\n  }\n}\n",
     """class Solution:
    def reverseList(self, head):
        prev = None
        while head != None:
            next = head.next
            head.next = prev
            prev = head
            head = next
        return prev


"""),
    ("lc0283-move-zeroes",
     "class Solution {\n  public void moveZeroes(int[] nums) {\n    int j = 0;\n    for (int i = 0; i < nums.length; i++) if (nums[i] != 0) { int t = nums[j]; nums[j++] = nums[i]; nums[i] = t; }\n  }\n}\n",
     """class Solution:
    def moveZeroes(self, nums):
        j = 0
        for i in range(len(nums)):
            if nums[i] != 0:
                t = nums[j]
                nums[j] = nums[i]
                nums[i] = t
                j += 1
"""),
    ("lc0344-reverse-string",
     "class Solution {\n  public void reverseString(char[] s) {\n    for (int i = 0, j = s.length - 1; i < j; i++, j--) { char t = s[i]; s[i] = s[j]; s[j] = t; }\n  }\n}\n",
     """class Solution:
    def reverseString(self, s):
        i = 0
        j = len(s) - 1
        while i < j:
            t = s[i]
            s[i] = s[j]
            s[j] = t
            i += 1
            j -= 1
"""),
    ("lc0509-fib",
     "class Solution {\n  public int fib(int n) {\n    if (n < 2) return n;\n    int[] dp = new int[n + 1];\n    dp[1] = 1;\n    for (int i = 2; i <= n; i++) dp[i] = dp[i - 1] + dp[i - 2];\n    return dp[n];\n  }\n}\n",
     """class Solution:
    def fib(self, n):
        if n < 2:
            return n
        dp = [0] * (n + 1)
        dp[1] = 1
        for i in range(2, n + 1):
            dp[i] = dp[i - 1] + dp[i - 2]
        return dp[n]
"""),
]


def unit(key):
    digest = hashlib.sha256(key.encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2.0**64


def probability(trace_id, index):
    u = unit(f"{trace_id}:{index}")
    if u < 0.55:
        return 1.0
    if u < 0.85:
        return round(0.95 + 0.05 * unit(f"{trace_id}:{index}:hi"), 6)
    return round(0.2 + 0.75 * unit(f"{trace_id}:{index}:lo"), 6)


def tokens_for(trace_id, source):
    out = []
    for tok in tokenize.generate_tokens(io.StringIO(source).readline):
        if tok.type in (tokenize.COMMENT, tokenize.NL, tokenize.ENDMARKER, tokenize.ENCODING):
            continue
        index = len(out)
        p = probability(trace_id, index)
        if tok.type == tokenize.NEWLINE:
            out.append({"t": "", "p": p, "k": "nl"})
        elif tok.type == tokenize.INDENT:
            out.append({"t": "", "p": p, "k": "ind"})
        elif tok.type == tokenize.DEDENT:
            out.append({"t": "", "p": p, "k": "ded"})
        else:
            entry = {"t": tok.string, "p": p}
            if p < 0.5:
                alt_p = round((1.0 - p) * 0.6, 6)
                entry["alt"] = [{"t": tok.string, "p": max(p, alt_p)}, {"t": "<unk>", "p": min(p, alt_p)}]
            out.append(entry)
    if trace_id == "lc0206-reverse-list":
        # One blank line after the class header: a line holding only a Newline.
        first_nl = next(i for i, t in enumerate(out) if t.get("k") == "nl")
        out.insert(first_nl + 1, {"t": "", "p": 0.61, "k": "nl"})
    return out


def main():
    for trace_id, java, python in PROGRAMS:
        record = {
            "id": trace_id,
            "source_lang": "java",
            "target_lang": "python3",
            "source_text": java,
            "beam_size": 5,
            "model_id": "fixture-mock:raw-softmax-top-beam",
            "tokens": tokens_for(trace_id, python),
        }
        sys.stdout.write(json.dumps(record, separators=(", ", ": ")) + "\n")


if __name__ == "__main__":
    main()
