// Generated by mml. Load mmlrt.js first; it defines the MMLRT runtime object.
"use strict";

function $List_length(xs) { return $toArray(xs).length; }
function $List_sum(xs) {
  var a = $toArray(xs), s = 0;
  for (var i = 0; i < a.length; i++) s += a[i];
  return s;
}
function $string_of_int(x) { return String(x); }
function $toArray(xs) {
  if (xs instanceof Array) return xs;
  var r = [];
  while (xs !== MMLRT.nil) { r.push(xs.h); xs = xs.t; }
  return r;
}

var half = function (n) { return ((n/2)|0); };
var rem = function (n) { return ((n%3)|0); };
var avg = function (xs) { return (($List_sum(xs)*1.0) / ($List_length(xs)*1.0)); };
var label = function (n) { return ("n=" + $string_of_int(n)); };

var $result = [half(7), half((0 - 7)), rem(10), avg(MMLRT.cons(1, MMLRT.cons(2, MMLRT.cons(4, MMLRT.nil)))), label(half(9))];
